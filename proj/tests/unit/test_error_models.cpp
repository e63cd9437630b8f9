#include <doctest.h>

#include <cmath>

#include "droneloc/error_models.hpp"

using namespace droneloc;

TEST_CASE("instrumental bound") {
  CHECK(bound_instrumental(0.10, 0, 20) == doctest::Approx(0.10));
  CHECK(bound_instrumental(0.10, 15, 15) == doctest::Approx(0.10 * std::sqrt(2.0)));
  CHECK(bound_instrumental(0.10, 30, 10) == doctest::Approx(0.31623).epsilon(1e-5));
  CHECK_THROWS_AS(bound_instrumental(0.10, 10, 0), std::invalid_argument);
}

TEST_CASE("rolling bound") {
  CHECK(bound_rolling(0) == 0.0);
  CHECK(bound_rolling(0.6) == 0.6);
  CHECK(bound_rolling(1.2) == 1.2);
  CHECK_THROWS(bound_rolling(-1));
}

TEST_CASE("altitude bound") {
  CHECK(bound_altitude(0.1, 10, 10) == doctest::Approx(0.1));
  CHECK(bound_altitude(0.2, 30, 60) == doctest::Approx(0.1));
  CHECK(bound_altitude(0, 25, 3) == 0.0);
  CHECK_THROWS_AS(bound_altitude(0.1, 10, 0), std::invalid_argument);
}

TEST_CASE("combined bound") {
  const auto b = bound_combined({0.10, 0.6, 0.1}, 10, 20);
  CHECK(b.combined == doctest::Approx(0.6 + 0.05 + 0.10 * std::sqrt(1.25)));
  CHECK(b.combined == doctest::Approx(0.76180).epsilon(1e-5));
  CHECK(b.combined == doctest::Approx(b.instrumental + b.rolling + b.altitude));
  CHECK(bound_combined({0, 0, 0}, 10, 20).combined == 0.0);
  for (double d : {1.0, 20.0, 500.0}) CHECK(bound_combined({0.1, 0, 0}, 0, d).combined == doctest::Approx(0.1));
  CHECK_THROWS(bound_combined({0.1, 0, 0}, 10, 0));
}

TEST_CASE("bound monotonicity") {
  const AccuracyProfile base{0.1, 0.5, 0.2};
  double prev = INFINITY;
  for (double d = 1; d <= 100; d += 1) {
    const double c = bound_combined(base, 20, d).combined;
    CHECK(c <= prev);
    prev = c;
  }
  prev = 0;
  for (double h = 0; h <= 60; h += 2) {
    const double c = bound_combined(base, h, 25).combined;
    CHECK(c >= prev);
    prev = c;
  }
  CHECK(bound_combined({0.2, 0.5, 0.2}, 20, 25).combined > bound_combined(base, 20, 25).combined);
  CHECK(bound_combined({0.1, 0.6, 0.2}, 20, 25).combined > bound_combined(base, 20, 25).combined);
  CHECK(bound_combined({0.1, 0.5, 0.3}, 20, 25).combined > bound_combined(base, 20, 25).combined);
  for (double h : {0.0, 1.0, 30.0}) {
    CHECK(bound_instrumental(0.1, h, 17) >= 0.1);
    CHECK((bound_instrumental(0.1, h, 17) == 0.1) == (h == 0.0));
  }
}

TEST_CASE("paper-fit profile") {
  CHECK(paper_fit_profile(10) == AccuracyProfile{0.10, 0.6, 0.1});
  CHECK(paper_fit_profile(20) == AccuracyProfile{0.10, 0.8, 0.15});
  CHECK(paper_fit_profile(30) == AccuracyProfile{0.10, 1.2, 0.2});
  CHECK(paper_fit_profile(25).gamma_d == doctest::Approx(1.0));
  CHECK(paper_fit_profile(5) == paper_fit_profile(10));
  CHECK(paper_fit_profile(50) == paper_fit_profile(30));
}

TEST_CASE("noise sampler support and determinism") {
  const AccuracyProfile zero{};
  Rng rng(1);
  const auto z = sample_noise(zero, rng);
  CHECK(z.e_s == 0.0);
  CHECK(z.roll_radius == 0.0);
  CHECK(z.e_h == 0.0);

  for (NoiseModel model : {NoiseModel::uniform, NoiseModel::truncated_gaussian}) {
    const AccuracyProfile p{0.1, 1.0, 0.2};
    Rng a(99), b(99);
    double max_s = 0, max_r = 0, max_h = 0;
    for (int i = 0; i < 100000; ++i) {
      const auto s = sample_noise(p, a, model);
      const auto t = sample_noise(p, b, model);
      REQUIRE(s.e_s == t.e_s);
      max_s = std::max(max_s, std::abs(s.e_s));
      max_r = std::max(max_r, s.roll_radius);
      max_h = std::max(max_h, std::abs(s.e_h));
      REQUIRE(s.roll_angle >= 0.0);
      REQUIRE(s.roll_angle < 2 * kPi);
    }
    CHECK(max_s <= 0.1);
    CHECK(max_r <= 1.0);
    CHECK(max_h <= 0.2);
  }
}

TEST_CASE("drift is centered on the scheduled position") {
  const AccuracyProfile p{0.1, 1.0, 0.2};
  Rng rng(2024);
  const int n = 1000000;
  double sx = 0, sy = 0, sxx = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    const auto s = sample_noise(p, rng);
    const double x = s.roll_radius * std::cos(s.roll_angle);
    const double y = s.roll_radius * std::sin(s.roll_angle);
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
  }
  const double mx = sx / n, my = sy / n;
  const double se_x = std::sqrt(sxx / n - mx * mx) / std::sqrt(double(n));
  const double se_y = std::sqrt(syy / n - my * my) / std::sqrt(double(n));
  CHECK(std::abs(mx) <= 3 * se_x);
  CHECK(std::abs(my) <= 3 * se_y);
  // disk-uniform: E[r^2] = gamma^2 / 2
  CHECK((sxx + syy) / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("measure") {
  const Waypoint w{{0, 0}, 10};
  CHECK(measure(w, {10, 0}, {}) == doctest::Approx(slant_distance(w, {10, 0})));
  NoiseSample away;
  away.roll_radius = 1;
  away.roll_angle = kPi;
  CHECK(measure(w, {10, 0}, away) == doctest::Approx(std::sqrt(221.0)));
  CHECK(measure(w, {10, 0}, away) == doctest::Approx(14.8661).epsilon(1e-5));
  NoiseSample up;
  up.e_h = 0.2;
  CHECK(measure(w, {10, 0}, up) == doctest::Approx(std::sqrt(10.2 * 10.2 + 100)));
  CHECK(measure(w, {10, 0}, up) == doctest::Approx(14.2843).epsilon(1e-5));
  NoiseSample neg;
  neg.e_s = -1000;
  CHECK(measure(w, {10, 0}, neg) == 0.0);
}

TEST_CASE("ground error stays within the combined bound") {
  // gamma_d <= d/20 and gamma_h <= h/20
  struct Cell {
    double h, d;
    AccuracyProfile p;
  };
  const Cell cells[] = {{20, 20, {0.1, 1.0, 1.0}}, {40, 30, {0.1, 1.5, 2.0}}, {10, 60, {0.2, 0.5, 0.5}}};
  for (const Cell& c : cells) {
    Rng rng(5);
    const Waypoint w{{0, 0}, c.h};
    const GroundPoint target{c.d, 0};
    const double bound = bound_combined(c.p, c.h, c.d).combined;
    int within = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
      const auto s = sample_noise(c.p, rng);
      const double g = project_slant_to_ground(measure(w, target, s), c.h).ground;
      if (std::abs(g - c.d) <= 1.02 * bound) ++within;
    }
    CHECK(within >= 0.999 * n);
  }
}
