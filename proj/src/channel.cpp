#include "droneloc/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace droneloc {

namespace {

// sub-urban, urban, dense, highrise
const std::array<LosTableRow, 5> kLosTable{{
    {1.0 / 3.0, 20.0, {1.00, 0.40, 0.20, 0.00}},
    {1.0 / 2.0, 26.5, {1.00, 0.75, 0.30, 0.05}},
    {1.0, 45.0, {1.00, 0.97, 0.85, 0.30}},
    {1.7320508075688772, 60.0, {1.00, 1.00, 1.00, 0.60}},
    {5.67, 80.0, {1.00, 1.00, 1.00, 1.00}},
}};

// Ratios computed as h/d can land one ulp below a tabulated key.
constexpr double kRatioSlack = 1e-12;

}  // namespace

std::string_view to_string(Environment env) {
  switch (env) {
    case Environment::suburban: return "sub-urban";
    case Environment::urban: return "urban";
    case Environment::dense: return "dense";
    case Environment::highrise: return "highrise";
  }
  return "unknown";
}

Environment parse_environment(std::string_view text) {
  if (text == "sub-urban" || text == "suburban") return Environment::suburban;
  if (text == "urban") return Environment::urban;
  if (text == "dense") return Environment::dense;
  if (text == "highrise") return Environment::highrise;
  throw std::invalid_argument("unknown environment '" + std::string(text) + "'");
}

void LinkBudget::validate() const {
  if (!(nlos_range > 0.0) || !(los_range >= nlos_range)) {
    throw std::invalid_argument("link budget requires los_range >= nlos_range > 0");
  }
}

std::span<const LosTableRow> los_table() { return kLosTable; }

double los_probability(Environment env, double h_over_d) {
  if (!(h_over_d >= 0.0)) throw std::invalid_argument("h/d must be non-negative");
  const auto column = static_cast<std::size_t>(env);
  const LosTableRow* row = &kLosTable.front();
  for (const LosTableRow& r : kLosTable) {
    if (h_over_d >= r.h_over_d * (1.0 - kRatioSlack)) row = &r;
  }
  return row->probability[column];
}

bool link_up_with_draw(Environment env, const LinkBudget& budget, double slant, double h_over_d,
                       double u) {
  if (slant <= budget.nlos_range) return true;
  if (slant > budget.los_range) return false;
  return u < los_probability(env, h_over_d);
}

bool link_up(Environment env, const LinkBudget& budget, double slant, double h_over_d, Rng& rng) {
  const double u = uniform01(rng);
  return link_up_with_draw(env, budget, slant, h_over_d, u);
}

}  // namespace droneloc
