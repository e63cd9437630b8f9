#include "droneloc/trilateration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace droneloc {

RangeMeasurement make_measurement(const Waypoint& w, double measured_slant) {
  const GroundProjection g = project_slant_to_ground(measured_slant, w.altitude);
  return {w, measured_slant, g.ground, g.clamped};
}

RangeMeasurement measurement_from_ground(const Waypoint& w, double ground) {
  return {w, std::hypot(ground, w.altitude), ground, false};
}

GroundPoint linearized_position(const std::array<GroundPoint, 3>& anchors,
                                const std::array<double, 3>& ranges) {
  if (min_interior_angle(anchors[0], anchors[1], anchors[2]) < kCollinearThreshold) {
    throw CollinearAnchors("anchor triangle is degenerate");
  }
  // Work relative to the first anchor: |p|^2 - d1^2 = 0 and
  // |p - a_i|^2 - d_i^2 = 0 give 2 a_i . p = |a_i|^2 + d1^2 - d_i^2.
  const GroundPoint a2 = anchors[1] - anchors[0];
  const GroundPoint a3 = anchors[2] - anchors[0];
  const double b2 = 0.5 * (dot(a2, a2) + ranges[0] * ranges[0] - ranges[1] * ranges[1]);
  const double b3 = 0.5 * (dot(a3, a3) + ranges[0] * ranges[0] - ranges[2] * ranges[2]);
  const double det = cross(a2, a3);
  const GroundPoint rel{(b2 * a3.y - b3 * a2.y) / det, (a2.x * b3 - a3.x * b2) / det};
  return anchors[0] + rel;
}

double objective(const std::array<GroundPoint, 3>& anchors, const std::array<double, 3>& ranges,
                 const GroundPoint& p) {
  double f = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double r = ranges[i] - distance(anchors[i], p);
    f += r * r;
  }
  return f;
}

namespace {

// Full Newton steps near the minimum. Gauss-Newton converges only linearly
// when residuals are nonzero, and the objective is too flat there to judge
// progress, so the iteration runs while the steps keep shrinking.
GroundPoint polish(const std::array<GroundPoint, 3>& anchors, const std::array<double, 3>& ranges,
                   GroundPoint x) {
  double last = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 20; ++it) {
    double h00 = 0.0, h01 = 0.0, h11 = 0.0, g0 = 0.0, g1 = 0.0;
    for (int i = 0; i < 3; ++i) {
      const GroundPoint diff = x - anchors[i];
      const double n = norm(diff);
      if (n < 1e-9) return x;
      const double ux = diff.x / n, uy = diff.y / n;
      const double k = (ranges[i] - n) / n;
      h00 += ux * ux - k * (1.0 - ux * ux);
      h01 += ux * uy + k * ux * uy;
      h11 += uy * uy - k * (1.0 - uy * uy);
      g0 -= ux * (ranges[i] - n);
      g1 -= uy * (ranges[i] - n);
    }
    const double det = h00 * h11 - h01 * h01;
    if (!(det > 0.0) || !(h00 > 0.0)) return x;
    const GroundPoint step{(-g0 * h11 + g1 * h01) / det, (-g1 * h00 + g0 * h01) / det};
    const double len = norm(step);
    if (!(len < last) || len > 1e-3) return x;
    x = x + step;
    if (len <= 1e-15 * (1.0 + norm(x))) return x;
    last = len;
  }
  return x;
}

}  // namespace

TrilaterationResult trilaterate(const std::array<GroundPoint, 3>& anchors,
                                const std::array<double, 3>& ranges,
                                std::optional<GroundPoint> initial_guess,
                                const SolverOptions& options) {
  GroundPoint x = initial_guess ? *initial_guess : linearized_position(anchors, ranges);
  if (initial_guess &&
      min_interior_angle(anchors[0], anchors[1], anchors[2]) < kCollinearThreshold) {
    throw CollinearAnchors("anchor triangle is degenerate");
  }

  double f = objective(anchors, ranges, x);
  double lambda = 0.0;
  TrilaterationResult result;
  result.estimate = x;

  for (int it = 0; it < options.max_iterations; ++it) {
    result.iterations = it;
    // Residual r_i = d_i - |x - a_i|, dr_i/dx = -(x - a_i)/|x - a_i|.
    double jtj00 = 0.0, jtj01 = 0.0, jtj11 = 0.0, jtr0 = 0.0, jtr1 = 0.0;
    for (int i = 0; i < 3; ++i) {
      GroundPoint diff = x - anchors[i];
      double n = norm(diff);
      if (n < 1e-12) {
        x = x + GroundPoint{1e-6, 1e-6};
        diff = x - anchors[i];
        n = norm(diff);
      }
      const double jx = -diff.x / n;
      const double jy = -diff.y / n;
      const double r = ranges[i] - n;
      jtj00 += jx * jx;
      jtj01 += jx * jy;
      jtj11 += jy * jy;
      jtr0 += jx * r;
      jtr1 += jy * r;
    }
    if (2.0 * std::hypot(jtr0, jtr1) <= options.gradient_tolerance) {
      result.converged = true;
      break;
    }

    bool accepted = false;
    while (lambda <= 1e12) {
      const double a = jtj00 + lambda;
      const double d = jtj11 + lambda;
      const double det = a * d - jtj01 * jtj01;
      if (std::abs(det) < 1e-14) {
        lambda = std::max(1e-9, lambda * 10.0);
        continue;
      }
      const GroundPoint step{(-jtr0 * d + jtr1 * jtj01) / det, (-jtr1 * a + jtr0 * jtj01) / det};
      const GroundPoint candidate = x + step;
      const double fc = objective(anchors, ranges, candidate);
      if (fc < f) {
        x = candidate;
        f = fc;
        lambda = lambda < 1e-12 ? 0.0 : lambda * 0.1;
        accepted = true;
        break;
      }
      if (norm(step) <= 1e-15 * (1.0 + norm(x))) break;
      lambda = std::max(1e-9, lambda * 10.0);
    }
    if (!accepted) break;
  }

  x = polish(anchors, ranges, x);

  result.estimate = x;
  result.objective = 0.0;
  for (int i = 0; i < 3; ++i) {
    result.residuals[i] = ranges[i] - distance(anchors[i], x);
    result.objective += result.residuals[i] * result.residuals[i];
  }
  {
    // The damped loop may stop on stagnation where the objective is too
    // flat to compare; judge convergence at the polished point.
    double g0 = 0.0, g1 = 0.0;
    for (int i = 0; i < 3; ++i) {
      const GroundPoint diff = x - anchors[i];
      const double n = norm(diff);
      if (n == 0.0) continue;
      g0 += -diff.x / n * result.residuals[i];
      g1 += -diff.y / n * result.residuals[i];
    }
    result.converged = 2.0 * std::hypot(g0, g1) <= options.gradient_tolerance;
  }
  return result;
}

TrilaterationResult trilaterate(const RangeMeasurement& m1, const RangeMeasurement& m2,
                                const RangeMeasurement& m3,
                                std::optional<GroundPoint> initial_guess,
                                const SolverOptions& options) {
  return trilaterate({m1.waypoint.position, m2.waypoint.position, m3.waypoint.position},
                     {m1.projected_ground, m2.projected_ground, m3.projected_ground},
                     initial_guess, options);
}

double star_vertex_distance(double ground_error, double beta, bool same_signs) {
  if (!(ground_error >= 0.0)) throw std::invalid_argument("ground error must be non-negative");
  if (!(beta >= 0.0 && beta < kPi)) throw std::invalid_argument("beta must lie in [0, pi)");
  if (same_signs) {
    if (beta == 0.0) throw std::invalid_argument("same-sign vertex is unbounded at beta = 0");
    return ground_error / std::sin(beta / 2.0);
  }
  return ground_error / std::cos(beta / 2.0);
}

double trilateration_accuracy(const AccuracyProfile& profile, double h, double d_min,
                              double beta_min) {
  if (!(beta_min > 0.0) || beta_min > kPi / 3.0 + 1e-12) {
    throw std::invalid_argument("beta_min must lie in (0, pi/3]");
  }
  return bound_combined(profile, h, d_min).combined / std::sin(beta_min / 2.0);
}

bool check_lemma(const TriangleGeometry& geometry) {
  return std::sin(geometry.beta_min() / 2.0) <= std::cos(geometry.beta_max() / 2.0);
}

}  // namespace droneloc
