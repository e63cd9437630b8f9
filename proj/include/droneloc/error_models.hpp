#pragma once

#include <string_view>

#include "droneloc/geometry.hpp"
#include "droneloc/rng.hpp"

namespace droneloc {

/// Maximum absolute errors of the ranging hardware (eps_s), of the drone's
/// horizontal position (gamma_d) and of its altitude (gamma_h). Meters.
struct AccuracyProfile {
  double eps_s = 0.0;
  double gamma_d = 0.0;
  double gamma_h = 0.0;

  void validate() const;
  friend bool operator==(const AccuracyProfile&, const AccuracyProfile&) = default;
};

/// Accuracy fitted to field measurements for h = 10, 20, 30 m
/// (eps_s = 0.10; gamma_d = 0.6, 0.8, 1.2; gamma_h = 0.1, 0.15, 0.2).
/// Other altitudes interpolate linearly between the fitted points and clamp
/// outside [10, 30].
AccuracyProfile paper_fit_profile(double h);

/// One draw of the perturbations affecting a single range measurement.
struct NoiseSample {
  double e_s = 0.0;          // signed ranging error
  double roll_angle = 0.0;   // direction of horizontal drift, [0, 2pi)
  double roll_radius = 0.0;  // magnitude of horizontal drift
  double e_h = 0.0;          // signed altitude error
};

struct GroundErrorBound {
  double instrumental = 0.0;
  double rolling = 0.0;
  double altitude = 0.0;
  double combined = 0.0;
};

enum class NoiseModel { uniform, truncated_gaussian };

std::string_view to_string(NoiseModel model);
NoiseModel parse_noise_model(std::string_view text);

/// eps_s * sqrt(1 + h^2/d^2). Throws std::invalid_argument for d <= 0.
double bound_instrumental(double eps_s, double h, double d);

/// Ground error of horizontal drift; valid while gamma_d << d.
double bound_rolling(double gamma_d);

/// gamma_h * h / d. Throws std::invalid_argument for d <= 0.
double bound_altitude(double gamma_h, double h, double d);

/// Linear sum of the three components at ground distance d. Evaluated with
/// d = d_min this is the ground accuracy eps_d.
GroundErrorBound bound_combined(const AccuracyProfile& profile, double h, double d);

/// Horizontal and vertical drone drift only (e_s left at 0).
void sample_drift(const AccuracyProfile& profile, Rng& rng, NoiseModel model, NoiseSample& out);

/// Ranging error only.
double sample_ranging_error(double eps_s, Rng& rng, NoiseModel model);

/// Draws every component from `rng`: uniform on [-eps_s, eps_s], drift
/// uniform on the disk of radius gamma_d, altitude uniform on
/// [-gamma_h, gamma_h]. The truncated-Gaussian model uses sigma = max/2 and
/// rejects draws outside the same supports.
NoiseSample sample_noise(const AccuracyProfile& profile, Rng& rng,
                         NoiseModel model = NoiseModel::uniform);

/// Slant distance from the perturbed drone position to `p`, plus the
/// ranging error, clamped at 0.
double measure(const Waypoint& w, const GroundPoint& p, const NoiseSample& noise);

}  // namespace droneloc
