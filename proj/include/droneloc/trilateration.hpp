#pragma once

#include <array>
#include <optional>
#include <stdexcept>

#include "droneloc/error_models.hpp"
#include "droneloc/geometry.hpp"

namespace droneloc {

/// A (waypoint, measured slant) record as stored by a ground device, with
/// the ground distance derived from it.
struct RangeMeasurement {
  Waypoint waypoint;
  double measured_slant = 0.0;
  double projected_ground = 0.0;
  bool clamped = false;
};

RangeMeasurement make_measurement(const Waypoint& w, double measured_slant);

/// Builds a measurement whose ground distance is given directly; the slant is
/// reconstructed from the waypoint altitude.
RangeMeasurement measurement_from_ground(const Waypoint& w, double ground);

struct TrilaterationResult {
  GroundPoint estimate;
  std::array<double, 3> residuals{};  // d_i - |W'_i P|
  double objective = 0.0;             // sum of squared residuals
  int iterations = 0;
  bool converged = false;
};

class CollinearAnchors : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverOptions {
  double gradient_tolerance = 1e-9;
  int max_iterations = 200;
};

/// Linear position from differencing the circle equations pairwise.
/// Throws CollinearAnchors when the anchor triangle is degenerate.
GroundPoint linearized_position(const std::array<GroundPoint, 3>& anchors,
                                const std::array<double, 3>& ranges);

/// Minimizes sum((d_i - |W'_i P|)^2) with Gauss-Newton, falling back to
/// Levenberg damping when a full step does not decrease the objective.
/// Returns the best iterate with converged = false when the gradient
/// tolerance is not met within the iteration budget.
TrilaterationResult trilaterate(const RangeMeasurement& m1, const RangeMeasurement& m2,
                                const RangeMeasurement& m3,
                                std::optional<GroundPoint> initial_guess = std::nullopt,
                                const SolverOptions& options = {});

TrilaterationResult trilaterate(const std::array<GroundPoint, 3>& anchors,
                                const std::array<double, 3>& ranges,
                                std::optional<GroundPoint> initial_guess = std::nullopt,
                                const SolverOptions& options = {});

double objective(const std::array<GroundPoint, 3>& anchors, const std::array<double, 3>& ranges,
                 const GroundPoint& p);

/// Distance from the true position to the star vertex formed by two
/// linearized extreme circles meeting at angle beta.
double star_vertex_distance(double ground_error, double beta, bool same_signs);

/// Maximum trilateration error: eps_d(h, d_min) / sin(beta_min / 2).
double trilateration_accuracy(const AccuracyProfile& profile, double h, double d_min,
                              double beta_min);

/// sin(beta_min / 2) <= cos(beta_max / 2).
bool check_lemma(const TriangleGeometry& geometry);

}  // namespace droneloc
