#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "droneloc/channel.hpp"
#include "droneloc/error_models.hpp"
#include "droneloc/estimators.hpp"
#include "droneloc/geometry.hpp"
#include "droneloc/stats.hpp"

namespace droneloc {

struct MissionConfig {
  double width = 100.0;
  double height = 100.0;
  double altitude = 10.0;  // effective: flight altitude above the antennas
  double inter_waypoint = 1.0;
  double scan_spacing = 25.0;
  double overfly = 30.0;  // vertical scans run this far past the top and bottom edges
  GroundPoint home{50.0, 11.0};
  Environment environment = Environment::suburban;
  LinkBudget budget;
  AccuracyProfile profile;
  bool paper_fit = false;  // derive the profile from the altitude
  NoiseModel noise = NoiseModel::uniform;
  SelectionConstraints constraints;
  double region_resolution = 0.01;
  int trials = 30;
  std::uint64_t seed = 42;
  int threads = 1;  // 0 = one per hardware thread

  // Ground devices on a triangular lattice.
  double gd_side = 30.0;
  int gd_count = 10;
  GroundPoint gd_origin{5.0, 11.0};

  void validate() const;
  AccuracyProfile effective_profile() const;
};

struct GroundDevice {
  std::int64_t id = 0;
  GroundPoint position;
};

struct Deployment {
  std::vector<GroundDevice> devices;
};

/// First `count` vertices of the triangular lattice with spacing `side`,
/// grown shell by shell from `origin` so that the first three form a
/// triangle and the first ten a triangle of side 3 * side.
Deployment deploy_triangular(double side, int count, GroundPoint origin = {});

Deployment deployment_for(const MissionConfig& cfg);

/// Boustrophedon path: vertical scans at x = 0, spacing, ... and at width,
/// spanning y in [-overfly, height + overfly], joined by horizontal legs and
/// flown from and back to home. Every leg is cut into equal steps no longer
/// than inter_waypoint. Waypoints on a vertical
/// scan carry its index; transit waypoints carry -1.
std::vector<Waypoint> generate_scan_path(const MissionConfig& cfg);

struct MeasurementRecord {
  std::int64_t gd_id = 0;
  Waypoint waypoint;
  double s_measured = 0.0;
  bool clamped = false;
  double ground_error = 0.0;  // projected minus true ground distance
};

struct EstimateRecord {
  std::int64_t gd_id = 0;
  Algorithm algorithm = Algorithm::omni;
  EstimateOutcome outcome;
  std::optional<double> error;  // E_L, present when the outcome is ok
};

struct TrialResult {
  int trial = 0;
  std::vector<MeasurementRecord> measurements;
  std::vector<EstimateRecord> estimates;
};

/// Flies the path once per trial, records every range that passes the link
/// gate and runs each algorithm for each device. Randomness is keyed by
/// (seed, trial, device, waypoint), so results do not depend on the thread
/// count.
std::vector<TrialResult> run_mission(const MissionConfig& cfg, const Deployment& deployment,
                                     std::span<const Algorithm> algorithms,
                                     bool keep_measurements = true);

/// Single fly-over for one trial (used by run_mission).
TrialResult run_trial(const MissionConfig& cfg, const Deployment& deployment,
                      std::span<const Waypoint> path, std::span<const Algorithm> algorithms,
                      int trial, bool keep_measurements);

enum class SweepAxis { d, beta, h, h_over_d };

std::string_view to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(std::string_view text);

/// Copy of `cfg` with one parameter set to `value`: d (meters, d_min moves
/// with it), beta (degrees), h (meters) or h_over_d (h in meters, d chosen
/// to keep the configured h/d ratio).
MissionConfig apply_axis(const MissionConfig& cfg, SweepAxis axis, double value);

struct SweepRow {
  double value = 0.0;
  Algorithm algorithm = Algorithm::omni;
  Summary summary;
  std::size_t attempts = 0;  // estimates requested
};

std::vector<SweepRow> aggregate(std::span<const TrialResult> results,
                                std::span<const Algorithm> algorithms, double value);

std::vector<SweepRow> sweep(const MissionConfig& cfg, std::span<const Algorithm> algorithms,
                            SweepAxis axis, std::span<const double> values);

}  // namespace droneloc
