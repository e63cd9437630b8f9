#pragma once

#include <array>
#include <optional>
#include <span>

#include "droneloc/geometry.hpp"

namespace droneloc {

struct CircleIntersection {
  int count = 0;  // 0, 1 (tangent) or 2
  std::array<GroundPoint, 2> points{};
};

/// Intersection points of two circles. Circles closer than `tangency_tol`
/// (relative to the radii) to tangency report a single point.
CircleIntersection intersect_circles(GroundPoint c1, double r1, GroundPoint c2, double r2,
                                     double tangency_tol = 1e-12);

/// Point minimizing the largest circle-membership violation
/// max(| |x - c1| - r1 |, | |x - c2| - r2 |) for two circles that do not
/// intersect: both radii are moved by half the gap until the circles touch.
/// Returns the violation through `gap_half` when given.
GroundPoint tangency_repair(GroundPoint c1, double r1, GroundPoint c2, double r2,
                            double* gap_half = nullptr);

/// Intersection of the perpendicular bisectors of chords ab and bc, i.e. the
/// center of the circle through a, b, c. Empty when either chord is shorter
/// than 1e-6 m or the bisectors are parallel.
std::optional<GroundPoint> chord_center(const GroundPoint& a, const GroundPoint& b,
                                        const GroundPoint& c);

/// Orthonormal frame attached to a straight flight line.
struct LineFrame {
  GroundPoint origin;
  GroundPoint along;   // unit vector along the line
  GroundPoint normal;  // along rotated by +90 degrees

  static LineFrame through(const GroundPoint& a, const GroundPoint& b);
  GroundPoint to_world(double u, double v) const { return origin + u * along + v * normal; }
  double u_of(const GroundPoint& p) const { return dot(p - origin, along); }
  double v_of(const GroundPoint& p) const { return dot(p - origin, normal); }
};

/// A disk (inside = true) or disk complement centered on the line at
/// coordinate `u`.
struct LineDisk {
  double u = 0.0;
  double radius = 0.0;
  bool inside = true;
};

struct RegionStats {
  double area = 0.0;
  GroundPoint centroid;
  double diameter = 0.0;
};

/// Area, centroid and diameter of the intersection of `disks` restricted to
/// one side of the line (side = +1 along `normal`, -1 opposite). The normal
/// coordinate is sampled at column centers `resolution` apart; each column's
/// extent along the line is computed exactly. Empty regions report area 0.
RegionStats integrate_line_region(const LineFrame& frame, std::span<const LineDisk> disks,
                                  int side, double resolution);

}  // namespace droneloc
