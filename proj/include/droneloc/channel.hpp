#pragma once

#include <array>
#include <span>
#include <string_view>

#include "droneloc/rng.hpp"

namespace droneloc {

enum class Environment { suburban, urban, dense, highrise };

std::string_view to_string(Environment env);
/// Accepts "sub-urban", "urban", "dense", "highrise".
Environment parse_environment(std::string_view text);

/// UWB ranging limits: any link up to nlos_range, line-of-sight only up to
/// los_range.
struct LinkBudget {
  double los_range = 60.0;
  double nlos_range = 35.0;

  void validate() const;
  friend bool operator==(const LinkBudget&, const LinkBudget&) = default;
};

/// One row of the air-to-ground LoS probability table.
struct LosTableRow {
  double h_over_d;
  double elevation_deg;
  std::array<double, 4> probability;  // indexed by Environment
};

/// Rows in ascending h/d order.
std::span<const LosTableRow> los_table();

/// Step lookup keyed by the largest tabulated ratio <= h_over_d. Ratios
/// below the first row reuse its values (highrise there is exactly 0).
double los_probability(Environment env, double h_over_d);

/// Link decision for a fixed uniform draw `u` in [0, 1). Monotone in slant.
bool link_up_with_draw(Environment env, const LinkBudget& budget, double slant, double h_over_d,
                       double u);

/// Consumes exactly one uniform from `rng` regardless of the outcome.
bool link_up(Environment env, const LinkBudget& budget, double slant, double h_over_d, Rng& rng);

}  // namespace droneloc
