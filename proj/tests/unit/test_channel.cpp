#include <doctest.h>

#include <cmath>

#include "droneloc/channel.hpp"

using namespace droneloc;

TEST_CASE("table lookups") {
  CHECK(los_probability(Environment::urban, 1.0) == 0.97);
  CHECK(los_probability(Environment::dense, 0.5) == 0.30);
  for (double r : {1.0 / 3.0, 0.5, 0.9, 1.0, 3.0, 100.0}) {
    CHECK(los_probability(Environment::suburban, r) == 1.0);
  }
  // ratios computed in floating point hit their row
  CHECK(los_probability(Environment::highrise, 10.0 / 30.0) == 0.0);
  CHECK(los_probability(Environment::highrise, 10.0 / 20.0) == 0.05);
  CHECK(los_probability(Environment::highrise, std::sqrt(3.0)) == 0.60);
  // step function: between rows the lower row applies
  CHECK(los_probability(Environment::urban, 0.99) == 0.75);
  CHECK(los_probability(Environment::highrise, 5.0) == 0.60);
  // beyond the top row and below the bottom row
  for (Environment e : {Environment::suburban, Environment::urban, Environment::dense,
                        Environment::highrise}) {
    CHECK(los_probability(e, 5.67) == 1.0);
    CHECK(los_probability(e, 40.0) == 1.0);
  }
  CHECK(los_probability(Environment::highrise, 0.1) == 0.0);
  CHECK(los_probability(Environment::urban, 0.1) == 0.40);
  CHECK_THROWS(los_probability(Environment::urban, -1.0));
}

TEST_CASE("environment names") {
  for (Environment e : {Environment::suburban, Environment::urban, Environment::dense,
                        Environment::highrise}) {
    CHECK(parse_environment(to_string(e)) == e);
  }
  CHECK(to_string(Environment::suburban) == "sub-urban");
  CHECK_THROWS(parse_environment("forest"));
}

TEST_CASE("link gate") {
  const LinkBudget budget;
  CHECK(budget.los_range == 60.0);
  CHECK(budget.nlos_range == 35.0);
  // within the NLoS range every draw succeeds
  CHECK(link_up_with_draw(Environment::highrise, budget, 35.0, 0.0, 0.999));
  // beyond the LoS range nothing does
  CHECK_FALSE(link_up_with_draw(Environment::suburban, budget, 60.001, 10.0, 0.0));
  // in between it depends on the LoS draw
  CHECK(link_up_with_draw(Environment::urban, budget, 50.0, 1.0, 0.96));
  CHECK_FALSE(link_up_with_draw(Environment::urban, budget, 50.0, 1.0, 0.97));
  CHECK_FALSE(link_up_with_draw(Environment::highrise, budget, 40.0, 0.2, 0.0));

  Rng a(3), b(3);
  int ups = 0;
  for (int i = 0; i < 20000; ++i) {
    const bool x = link_up(Environment::dense, budget, 45.0, 1.0, a);
    const double u = uniform01(b);
    CHECK(x == link_up_with_draw(Environment::dense, budget, 45.0, 1.0, u));
    ups += x;
  }
  CHECK(ups / 20000.0 == doctest::Approx(0.85).epsilon(0.02));
}

TEST_CASE("link budget validation") {
  CHECK_NOTHROW(LinkBudget{}.validate());
  CHECK_THROWS(LinkBudget{30, 35}.validate());
  CHECK_THROWS(LinkBudget{60, 0}.validate());
}
