#include <doctest.h>

#include <cmath>
#include <random>

#include "droneloc/error_models.hpp"
#include "droneloc/trilateration.hpp"
#include "../support/oracles.hpp"

using namespace droneloc;

namespace {

const std::array<GroundPoint, 3> kEquilateral{{{0, 0}, {40, 0}, {20, 34.641016151377546}}};
const GroundPoint kCenter{20, 11.547005383792516};

std::array<double, 3> ranges_to(const std::array<GroundPoint, 3>& a, GroundPoint p) {
  return {distance(a[0], p), distance(a[1], p), distance(a[2], p)};
}

// Anchors at ground distance d from p on lines at 0, beta and
// beta + (pi - beta)/2, so the smallest line angle at p is beta.
std::array<GroundPoint, 3> anchors_at(GroundPoint p, double d, double beta) {
  const double t[3] = {0.0, beta, beta + 0.5 * (kPi - beta)};
  std::array<GroundPoint, 3> a;
  for (int i = 0; i < 3; ++i) a[i] = p + d * GroundPoint{std::cos(t[i]), std::sin(t[i])};
  return a;
}

}  // namespace

TEST_CASE("exact ranges recover the point") {
  const auto r = trilaterate(kEquilateral, ranges_to(kEquilateral, kCenter));
  CHECK(r.converged);
  CHECK(distance(r.estimate, kCenter) <= 1e-6);
  CHECK(r.objective <= 1e-12);
}

TEST_CASE("symmetric inflation cancels") {
  auto ranges = ranges_to(kEquilateral, kCenter);
  for (double& x : ranges) x += 0.1;
  const auto r = trilaterate(kEquilateral, ranges);
  CHECK(distance(r.estimate, kCenter) <= 1e-6);
  CHECK(r.objective == doctest::Approx(0.03).epsilon(1e-9));
  double s = 0;
  for (double x : r.residuals) s += x * x;
  CHECK(r.objective == doctest::Approx(s).epsilon(1e-9));
}

TEST_CASE("small instance matches the millimeter grid") {
  const std::array<GroundPoint, 3> a{{{0, 0}, {8, 0}, {4, 10}}};
  const std::array<double, 3> d{5.1, 5.0, 7.0};
  const auto r = trilaterate(a, d);
  const auto g = oracle::millimeter_minimum(a, d, {-5, -5}, {15, 15});
  CHECK(r.objective <= g.objective + 1e-6);
  CHECK(distance(r.estimate, g.point) <= 2e-3);
}

TEST_CASE("measurement overload and collinear anchors") {
  const Waypoint w1{{0, 0}, 10, 1, 0}, w2{{40, 0}, 10, 2, 0}, w3{kEquilateral[2], 10, 3, 1};
  const auto r = trilaterate(make_measurement(w1, slant_distance(w1, kCenter)),
                             make_measurement(w2, slant_distance(w2, kCenter)),
                             make_measurement(w3, slant_distance(w3, kCenter)));
  CHECK(distance(r.estimate, kCenter) <= 1e-6);
  const std::array<GroundPoint, 3> line{{{0, 0}, {10, 0}, {20, 0}}};
  CHECK_THROWS_AS(trilaterate(line, {5, 5, 5}), CollinearAnchors);
  CHECK_THROWS_AS(linearized_position(line, {5, 5, 5}), CollinearAnchors);
}

TEST_CASE("zero-noise consistency and rigid motion") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> pos(-50, 50), ang(0, 2 * kPi);
  int checked = 0;
  while (checked < 500) {
    std::array<GroundPoint, 3> a{{{pos(gen), pos(gen)}, {pos(gen), pos(gen)}, {pos(gen), pos(gen)}}};
    const GroundPoint p{pos(gen), pos(gen)};
    if (min_interior_angle(a[0], a[1], a[2]) < deg_to_rad(5)) continue;
    if (beta_angles(p, a[0], a[1], a[2]).beta_min() < deg_to_rad(5)) continue;
    ++checked;
    const auto r = trilaterate(a, ranges_to(a, p));
    CHECK(distance(r.estimate, p) <= 1e-6);

    // noisy ranges, then move everything rigidly
    auto d = ranges_to(a, p);
    for (double& x : d) x += 0.3 * (pos(gen) / 50.0);
    const auto base = trilaterate(a, d);
    const double th = ang(gen);
    const GroundPoint shift{pos(gen), pos(gen)};
    auto move = [&](GroundPoint q) {
      return GroundPoint{std::cos(th) * q.x - std::sin(th) * q.y + shift.x,
                         std::sin(th) * q.x + std::cos(th) * q.y + shift.y};
    };
    const std::array<GroundPoint, 3> b{{move(a[0]), move(a[1]), move(a[2])}};
    const auto moved = trilaterate(b, d);
    CHECK(distance(moved.estimate, move(base.estimate)) <= 1e-9 * (1 + norm(shift)));
  }
}

TEST_CASE("star vertex distances") {
  CHECK(star_vertex_distance(1, deg_to_rad(60), true) == doctest::Approx(2.0));
  CHECK(star_vertex_distance(1, deg_to_rad(90), false) == doctest::Approx(std::sqrt(2.0)));
  CHECK(star_vertex_distance(0.76, deg_to_rad(60), true) == doctest::Approx(1.52));
  CHECK_THROWS(star_vertex_distance(1, 0, true));
  CHECK(star_vertex_distance(1, 0, false) == doctest::Approx(1.0));
  CHECK_THROWS(star_vertex_distance(-1, 1, true));
}

TEST_CASE("trilateration accuracy") {
  const AccuracyProfile rover{0.10, 0, 0};
  CHECK(trilateration_accuracy(rover, 0, 20, deg_to_rad(60)) == doctest::Approx(0.2));
  double prev = std::numeric_limits<double>::infinity();
  for (int deg = 1; deg <= 60; ++deg) {
    const double b = trilateration_accuracy(rover, 0, 20, deg_to_rad(deg));
    CHECK(b < prev);
    prev = b;
  }
  CHECK(trilateration_accuracy(rover, 0, 20, 1e-9) > 1e7);
  CHECK_THROWS(trilateration_accuracy(rover, 0, 20, 0));
  CHECK_THROWS(trilateration_accuracy(rover, 0, 20, deg_to_rad(61)));
  CHECK_THROWS(trilateration_accuracy(rover, 0, 0, deg_to_rad(30)));
}

TEST_CASE("lemma") {
  CHECK(check_lemma({{kPi / 3, kPi / 3, kPi / 3}}));
  CHECK(check_lemma({{deg_to_rad(10), deg_to_rad(80), deg_to_rad(90)}}));
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0, kPi);
  int violations = 0;
  for (int i = 0; i < 100000; ++i) {
    double a = u(gen), b = u(gen);
    if (a > b) std::swap(a, b);
    std::array<double, 3> t{a, b - a, kPi - b};
    std::sort(t.begin(), t.end());
    violations += !check_lemma({t});
  }
  CHECK(violations == 0);
}

TEST_CASE("bound dominance at the error extremes") {
  const AccuracyProfile profile = paper_fit_profile(10);
  for (double d : {10.0, 20.0, 30.0, 60.0}) {
    const double eps_d = bound_combined(profile, 10, d).combined;
    if (d < 10 * eps_d) continue;
    for (double deg : {30.0, 45.0, 60.0}) {
      const double beta = deg_to_rad(deg);
      const GroundPoint p{3, -7};
      const auto a = anchors_at(p, d, beta);
      REQUIRE(beta_angles(p, a[0], a[1], a[2]).beta_min() == doctest::Approx(beta));
      const double bound = trilateration_accuracy(profile, 10, d, beta);
      for (int mask = 0; mask < 8; ++mask) {
        std::array<double, 3> r;
        for (int i = 0; i < 3; ++i) r[i] = d + ((mask >> i) & 1 ? eps_d : -eps_d);
        const auto est = trilaterate(a, r);
        CHECK(distance(est.estimate, p) <= 1.05 * bound);
      }
    }
  }
}
