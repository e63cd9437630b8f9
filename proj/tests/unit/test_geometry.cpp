#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "droneloc/geometry.hpp"
#include "droneloc/rng.hpp"

using namespace droneloc;

namespace {

GroundPoint polar(GroundPoint c, double deg, double r) {
  return {c.x + r * std::cos(deg_to_rad(deg)), c.y + r * std::sin(deg_to_rad(deg))};
}

// Angles between three lines through a point, by sweeping a ray through all
// orientations in 1e-4 degree steps and measuring the gaps between the steps
// that contain a line.
std::array<double, 3> brute_force_angles(std::array<double, 3> bearings_deg) {
  std::array<double, 3> folded{};
  for (int i = 0; i < 3; ++i) folded[i] = std::fmod(std::fmod(bearings_deg[i], 180.0) + 180.0, 180.0);
  std::vector<double> hits;
  const long steps = 1800000;
  for (long s = 0; s < steps; ++s) {
    const double a = 180.0 * static_cast<double>(s) / static_cast<double>(steps);
    const double next = 180.0 * static_cast<double>(s + 1) / static_cast<double>(steps);
    for (double f : folded) {
      if (f >= a && f < next) hits.push_back(a);
    }
  }
  std::sort(hits.begin(), hits.end());
  std::array<double, 3> out{hits[1] - hits[0], hits[2] - hits[1], 180.0 - (hits[2] - hits[0])};
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("ground distance") {
  CHECK(ground_distance({{0, 0}, 10}, {3, 4}) == doctest::Approx(5.0));
  CHECK(ground_distance({{0, 0}, 7}, {0, 0}) == 0.0);
  CHECK(ground_distance({{5, 5}, 20}, {35, 45}) == doctest::Approx(50.0));
}

TEST_CASE("slant distance") {
  CHECK(slant_distance({{0, 0}, 0}, {7, 0}) == doctest::Approx(7.0));
  CHECK(slant_distance({{0, 0}, 3}, {4, 0}) == doctest::Approx(5.0));
  CHECK(slant_distance({{0, 0}, 10}, {0, 0}) == doctest::Approx(10.0));
}

TEST_CASE("elevation angle") {
  CHECK(elevation_angle(10, 10) == doctest::Approx(kPi / 4));
  CHECK(elevation_angle(0, 5) == 0.0);
  CHECK(rad_to_deg(elevation_angle(5.67, 1.0)) == doctest::Approx(80.0).epsilon(0.1 / 80.0));
  CHECK(elevation_angle(3, 0) == doctest::Approx(kPi / 2));
  CHECK_THROWS_AS(elevation_angle(0, 0), GeometryError);
}

TEST_CASE("slant to ground projection") {
  auto g = project_slant_to_ground(5, 3);
  CHECK(g.ground == doctest::Approx(4.0));
  CHECK_FALSE(g.clamped);
  g = project_slant_to_ground(10, 10);
  CHECK(g.ground == 0.0);
  CHECK_FALSE(g.clamped);
  g = project_slant_to_ground(9.9, 10);
  CHECK(g.ground == 0.0);
  CHECK(g.clamped);
}

TEST_CASE("beta angles") {
  const GroundPoint p{2, -1};
  SUBCASE("symmetric bearings") {
    const auto g = beta_angles(p, polar(p, 0, 5), polar(p, 120, 7), polar(p, 240, 3));
    for (double b : g.beta) CHECK(b == doctest::Approx(kPi / 3));
  }
  SUBCASE("collinear pair") {
    const auto g = beta_angles(p, polar(p, 0, 5), polar(p, 90, 7), polar(p, 180, 3));
    CHECK(g.beta_min() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(g.beta_max() == doctest::Approx(kPi / 2));
    CHECK(g.collinear());
  }
  SUBCASE("30/60/90 against ray sweep") {
    const auto g = beta_angles(p, polar(p, 0, 5), polar(p, 30, 7), polar(p, 90, 3));
    const auto oracle = brute_force_angles({0, 30, 90});
    CHECK(rad_to_deg(g.beta[0]) == doctest::Approx(30.0));
    CHECK(rad_to_deg(g.beta[1]) == doctest::Approx(60.0));
    CHECK(rad_to_deg(g.beta[2]) == doctest::Approx(90.0));
    for (int i = 0; i < 3; ++i) CHECK(rad_to_deg(g.beta[i]) == doctest::Approx(oracle[i]).epsilon(1e-5));
  }
  SUBCASE("random bearings against ray sweep") {
    Rng rng(7);
    for (int t = 0; t < 3; ++t) {
      const std::array<double, 3> deg{uniform(rng, 0, 360), uniform(rng, 0, 360), uniform(rng, 0, 360)};
      const auto g = beta_angles(p, polar(p, deg[0], 4), polar(p, deg[1], 9), polar(p, deg[2], 2));
      const auto oracle = brute_force_angles(deg);
      for (int i = 0; i < 3; ++i) CHECK(rad_to_deg(g.beta[i]) == doctest::Approx(oracle[i]).epsilon(1e-5));
    }
  }
  CHECK_THROWS_AS(beta_angles(p, p, {1, 1}, {3, 4}), GeometryError);
}

TEST_CASE("geometry properties") {
  Rng rng(11);
  for (int t = 0; t < 2000; ++t) {
    const Waypoint w{{uniform(rng, -50, 50), uniform(rng, -50, 50)}, uniform(rng, 0, 40)};
    const GroundPoint p{uniform(rng, -50, 50), uniform(rng, -50, 50)};
    const double s = slant_distance(w, p), d = ground_distance(w, p);
    CHECK(s * s == doctest::Approx(d * d + w.altitude * w.altitude).epsilon(1e-9));
    CHECK(project_slant_to_ground(s, w.altitude).ground == doctest::Approx(d).epsilon(1e-9).scale(1));

    std::array<GroundPoint, 3> ws{};
    for (auto& q : ws) q = {uniform(rng, -50, 50), uniform(rng, -50, 50)};
    const auto g = beta_angles(p, ws[0], ws[1], ws[2]);
    CHECK(g.beta[0] + g.beta[1] + g.beta[2] == doctest::Approx(kPi).epsilon(1e-12));
    CHECK(g.beta[0] <= g.beta[1]);
    CHECK(g.beta[1] <= g.beta[2]);
    // relabeling
    const auto h = beta_angles(p, ws[2], ws[0], ws[1]);
    for (int i = 0; i < 3; ++i) CHECK(h.beta[i] == doctest::Approx(g.beta[i]).epsilon(1e-9).scale(1));
    // rigid motion
    const double a = uniform(rng, 0, 2 * kPi);
    const GroundPoint shift{uniform(rng, -10, 10), uniform(rng, -10, 10)};
    auto move = [&](GroundPoint q) {
      return GroundPoint{std::cos(a) * q.x - std::sin(a) * q.y + shift.x,
                         std::sin(a) * q.x + std::cos(a) * q.y + shift.y};
    };
    const auto m = beta_angles(move(p), move(ws[0]), move(ws[1]), move(ws[2]));
    for (int i = 0; i < 3; ++i) CHECK(m.beta[i] == doctest::Approx(g.beta[i]).epsilon(1e-9).scale(1));
  }
}

TEST_CASE("min interior angle") {
  CHECK(min_interior_angle({0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}) == doctest::Approx(kPi / 3));
  CHECK(min_interior_angle({0, 0}, {1, 0}, {2, 0}) == doctest::Approx(0.0));
  CHECK(min_interior_angle({0, 0}, {0, 0}, {2, 0}) == 0.0);
}
