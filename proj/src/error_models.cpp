#include "droneloc/error_models.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace droneloc {

void AccuracyProfile::validate() const {
  if (!(eps_s >= 0.0) || !(gamma_d >= 0.0) || !(gamma_h >= 0.0)) {
    throw std::invalid_argument("accuracy values must be finite and non-negative");
  }
}

AccuracyProfile paper_fit_profile(double h) {
  static constexpr std::array<double, 3> kH{10.0, 20.0, 30.0};
  static constexpr std::array<double, 3> kGammaD{0.6, 0.8, 1.2};
  static constexpr std::array<double, 3> kGammaH{0.1, 0.15, 0.2};
  AccuracyProfile p;
  p.eps_s = 0.10;
  if (h <= kH.front()) {
    p.gamma_d = kGammaD.front();
    p.gamma_h = kGammaH.front();
    return p;
  }
  if (h >= kH.back()) {
    p.gamma_d = kGammaD.back();
    p.gamma_h = kGammaH.back();
    return p;
  }
  std::size_t i = (h < kH[1]) ? 0 : 1;
  const double t = (h - kH[i]) / (kH[i + 1] - kH[i]);
  p.gamma_d = kGammaD[i] + t * (kGammaD[i + 1] - kGammaD[i]);
  p.gamma_h = kGammaH[i] + t * (kGammaH[i + 1] - kGammaH[i]);
  return p;
}

std::string_view to_string(NoiseModel model) {
  return model == NoiseModel::uniform ? "uniform" : "truncated-gaussian";
}

NoiseModel parse_noise_model(std::string_view text) {
  if (text == "uniform") return NoiseModel::uniform;
  if (text == "truncated-gaussian") return NoiseModel::truncated_gaussian;
  throw std::invalid_argument("unknown noise model '" + std::string(text) + "'");
}

double bound_instrumental(double eps_s, double h, double d) {
  if (!(d > 0.0)) throw std::invalid_argument("ground distance must be positive");
  const double r = h / d;
  return eps_s * std::sqrt(1.0 + r * r);
}

double bound_rolling(double gamma_d) {
  if (!(gamma_d >= 0.0)) throw std::invalid_argument("rolling accuracy must be non-negative");
  return gamma_d;
}

double bound_altitude(double gamma_h, double h, double d) {
  if (!(d > 0.0)) throw std::invalid_argument("ground distance must be positive");
  return gamma_h * h / d;
}

GroundErrorBound bound_combined(const AccuracyProfile& profile, double h, double d) {
  profile.validate();
  GroundErrorBound b;
  b.instrumental = bound_instrumental(profile.eps_s, h, d);
  b.rolling = bound_rolling(profile.gamma_d);
  b.altitude = bound_altitude(profile.gamma_h, h, d);
  b.combined = b.instrumental + b.rolling + b.altitude;
  return b;
}

namespace {

double standard_normal(Rng& rng) {
  // Box-Muller on our own uniforms so streams match across standard libraries.
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

double symmetric_error(double max_abs, Rng& rng, NoiseModel model) {
  if (model == NoiseModel::uniform) return uniform(rng, -max_abs, max_abs);
  if (max_abs == 0.0) return 0.0;
  for (;;) {
    const double x = 0.5 * max_abs * standard_normal(rng);
    if (std::abs(x) <= max_abs) return x;
  }
}

}  // namespace

double sample_ranging_error(double eps_s, Rng& rng, NoiseModel model) {
  return symmetric_error(eps_s, rng, model);
}

void sample_drift(const AccuracyProfile& profile, Rng& rng, NoiseModel model, NoiseSample& out) {
  if (model == NoiseModel::uniform) {
    out.roll_angle = 2.0 * kPi * uniform01(rng);
    out.roll_radius = profile.gamma_d * std::sqrt(uniform01(rng));
  } else if (profile.gamma_d == 0.0) {
    out.roll_angle = 0.0;
    out.roll_radius = 0.0;
  } else {
    for (;;) {
      const double ex = 0.5 * profile.gamma_d * standard_normal(rng);
      const double ey = 0.5 * profile.gamma_d * standard_normal(rng);
      const double r = std::hypot(ex, ey);
      if (r <= profile.gamma_d) {
        double psi = std::atan2(ey, ex);
        if (psi < 0.0) psi += 2.0 * kPi;
        if (psi >= 2.0 * kPi) psi = 0.0;
        out.roll_angle = psi;
        out.roll_radius = r;
        break;
      }
    }
  }
  out.e_h = symmetric_error(profile.gamma_h, rng, model);
}

NoiseSample sample_noise(const AccuracyProfile& profile, Rng& rng, NoiseModel model) {
  profile.validate();
  NoiseSample s;
  s.e_s = sample_ranging_error(profile.eps_s, rng, model);
  sample_drift(profile, rng, model, s);
  return s;
}

double measure(const Waypoint& w, const GroundPoint& p, const NoiseSample& noise) {
  const GroundPoint drone{w.position.x + noise.roll_radius * std::cos(noise.roll_angle),
                          w.position.y + noise.roll_radius * std::sin(noise.roll_angle)};
  const double s = std::hypot(distance(drone, p), w.altitude + noise.e_h) + noise.e_s;
  return std::max(0.0, s);
}

}  // namespace droneloc
