#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "droneloc/geometry.hpp"
#include "droneloc/trilateration.hpp"

namespace droneloc {

/// Waypoint selection constraints shared by all algorithms.
///  - target_d, tolerance: ground distance band [target_d - tau, target_d + tau]
///  - min_beta: required smallest bearing angle (radians), 0 = unconstrained
///  - d_min: minimum ground distance for the geometry-driven stage of Omni
struct SelectionConstraints {
  double target_d = 30.0;
  double tolerance = 1.0;
  double min_beta = 0.0;
  double d_min = 29.0;

  void validate() const;
  bool in_band(double ground) const {
    return ground >= target_d - tolerance && ground <= target_d + tolerance;
  }
  friend bool operator==(const SelectionConstraints&, const SelectionConstraints&) = default;
};

enum class EstimateStatus { ok, no_valid_triple, ambiguous, degenerate };
enum class Algorithm { omni, scan, drbc, drf, ioc, ioa };

inline constexpr std::array<Algorithm, 6> kAllAlgorithms{
    Algorithm::omni, Algorithm::scan, Algorithm::drbc,
    Algorithm::drf,  Algorithm::ioc,  Algorithm::ioa};

std::string_view to_string(EstimateStatus status);
std::string_view to_string(Algorithm algorithm);
EstimateStatus parse_status(std::string_view text);
/// Accepts "omni", "scan", "drb-c", "drf", "ioc", "ioa".
Algorithm parse_algorithm(std::string_view text);

struct EstimateOutcome {
  std::optional<GroundPoint> estimate;  // present iff status == ok
  EstimateStatus status = EstimateStatus::no_valid_triple;
  std::vector<std::int64_t> used_waypoints;
  bool degraded = false;  // selection constraints could not be met
  bool repaired = false;  // an empty intersection was replaced by a fallback
  bool converged = true;  // trilateration-based algorithms only
  std::optional<GroundPoint> coarse_estimate;  // Omni first stage
  std::optional<double> region_diameter;       // IoC / IoA
  double beta_min = 0.0;                       // geometry of the chosen triple
};

struct SelectedTriple {
  std::array<RangeMeasurement, 3> measurements;
  double beta_min = 0.0;
};

/// Exhaustive constrained selection: measurements within the distance band,
/// non-collinear, with beta_min >= c.min_beta evaluated at `reference` (or,
/// without one, at the triple's own linearized position). Maximizes
/// beta_min; ties go to the lexicographically earliest waypoint ids.
std::optional<SelectedTriple> select_triple(std::span<const RangeMeasurement> measurements,
                                            const SelectionConstraints& c,
                                            std::optional<GroundPoint> reference = std::nullopt);

/// A point with a bearing from some reference, used by the geometry search.
struct BearingCandidate {
  double orientation = 0.0;  // line orientation in [0, pi)
  double ground = 0.0;       // distance used for tie-breaking
  std::int64_t id = 0;
};

/// Best-geometry triple: maximizes beta_min over all triples, then among the
/// triples within `slack` of that optimum prefers the largest smallest
/// ground distance, then the earliest ids. O(n^2 log n). Returns indices
/// into `candidates`.
std::optional<std::array<std::size_t, 3>> best_geometry_triple(
    std::span<const BearingCandidate> candidates, double slack);

/// Circle-intersection position from two ranges, disambiguated by a third.
EstimateOutcome drbc_from_triple(const RangeMeasurement& first, const RangeMeasurement& second,
                                 const RangeMeasurement& third, double tolerance);

EstimateOutcome estimate_scan(std::span<const RangeMeasurement> measurements,
                              const SelectionConstraints& c);
EstimateOutcome estimate_omni(std::span<const RangeMeasurement> measurements,
                              const SelectionConstraints& c);
EstimateOutcome estimate_drbc(std::span<const RangeMeasurement> measurements,
                              const SelectionConstraints& c);
EstimateOutcome estimate_drf(std::span<const RangeMeasurement> measurements,
                             const SelectionConstraints& c);
EstimateOutcome estimate_ioc(std::span<const RangeMeasurement> measurements,
                             const SelectionConstraints& c, double resolution = 0.01);
EstimateOutcome estimate_ioa(std::span<const RangeMeasurement> measurements,
                             const SelectionConstraints& c, double resolution = 0.01);

EstimateOutcome estimate(Algorithm algorithm, std::span<const RangeMeasurement> measurements,
                         const SelectionConstraints& c, double resolution = 0.01);

/// Point on the flight segment a -> b where the ground distance to the
/// device equals `radius`, recovered from the two bracketing distances
/// alone: |a + t(b - a) - P|^2 is quadratic in t with coefficients fixed by
/// da, db and |ab|.
std::optional<GroundPoint> range_crossing(const GroundPoint& a, double da, const GroundPoint& b,
                                          double db, double radius);

}  // namespace droneloc
