#pragma once

#include <cstddef>
#include <span>

namespace droneloc {

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
  double ci_low = 0.0;
  double ci_high = 0.0;
};

/// Mean with a two-sided Student-t confidence interval. With fewer than two
/// samples the interval collapses onto the mean.
Summary summarize(std::span<const double> values, double level = 0.95);

}  // namespace droneloc
