#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace droneloc {

inline constexpr double kPi = std::numbers::pi;

/// A waypoint triple is treated as collinear when its smallest bearing
/// angle at the target falls below this value (radians).
inline constexpr double kCollinearThreshold = 1e-3;

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A position on the ground plane, meters.
struct GroundPoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const GroundPoint&, const GroundPoint&) = default;
};

inline GroundPoint operator+(GroundPoint a, GroundPoint b) { return {a.x + b.x, a.y + b.y}; }
inline GroundPoint operator-(GroundPoint a, GroundPoint b) { return {a.x - b.x, a.y - b.y}; }
inline GroundPoint operator*(double k, GroundPoint a) { return {k * a.x, k * a.y}; }
inline double dot(GroundPoint a, GroundPoint b) { return a.x * b.x + a.y * b.y; }
inline double cross(GroundPoint a, GroundPoint b) { return a.x * b.y - a.y * b.x; }
inline double norm(GroundPoint a) { return std::hypot(a.x, a.y); }
inline double distance(GroundPoint a, GroundPoint b) { return norm(a - b); }

/// Scheduled drone position: ground projection plus altitude above the
/// receiving antenna. `scan_line` is the vertical scan index assigned by the
/// path generator, or -1 for transit legs.
struct Waypoint {
  GroundPoint position;
  double altitude = 0.0;
  std::int64_t id = 0;
  int scan_line = -1;
};

/// The three angles into which the lines from a target to three anchors
/// divide the straight angle at the target. Sorted ascending, sum to pi.
struct TriangleGeometry {
  std::array<double, 3> beta{};

  double beta_min() const { return beta[0]; }
  double beta_max() const { return beta[2]; }
  bool collinear() const { return beta[0] < kCollinearThreshold; }
};

double ground_distance(const Waypoint& w, const GroundPoint& p);
double slant_distance(const Waypoint& w, const GroundPoint& p);

/// arctan(h/d) in [0, pi/2]. Throws GeometryError for h = d = 0.
double elevation_angle(double h, double d);

struct GroundProjection {
  double ground = 0.0;
  bool clamped = false;  // measured slant was shorter than the altitude
};

/// Exact inverse of the slant construction: sqrt(s^2 - h^2), clamped at 0.
GroundProjection project_slant_to_ground(double s_measured, double h);

/// Bearing-line angles at `p`. Throws GeometryError when `p` coincides with
/// one of the anchors. Coincident or collinear anchors yield beta_min ~ 0.
TriangleGeometry beta_angles(const GroundPoint& p, const GroundPoint& w1, const GroundPoint& w2,
                             const GroundPoint& w3);

/// Orientation of the line through `from` and `to`, folded into [0, pi).
double line_orientation(const GroundPoint& from, const GroundPoint& to);

/// Smallest interior angle of the triangle (a, b, c); 0 for degenerate input.
double min_interior_angle(const GroundPoint& a, const GroundPoint& b, const GroundPoint& c);

}  // namespace droneloc
