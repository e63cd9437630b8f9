#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "droneloc/estimators.hpp"
#include "droneloc/mission.hpp"

namespace droneloc {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything a simulate run needs, with values as written in the config
/// file (the selection angle stays in degrees, d_min may be left to follow
/// d - tolerance).
struct RunConfig {
  MissionConfig mission;
  double beta_deg = 30.0;
  std::optional<double> d_min;
  std::vector<Algorithm> algorithms{kAllAlgorithms.begin(), kAllAlgorithms.end()};

  /// Mission parameters with the derived selection fields filled in.
  MissionConfig resolved() const;
  friend bool operator==(const RunConfig& a, const RunConfig& b);
};

/// Parses the sectioned key = value format. Unknown sections or keys,
/// malformed lines and bad values raise ConfigError("<source>:<line>: ...").
RunConfig parse_config(std::string_view text, std::string_view source = "<config>");

RunConfig load_config(const std::string& path);

/// Sets one key; `section.key=value` form. Throws ConfigError.
void apply_override(RunConfig& cfg, std::string_view assignment);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& cfg);

}  // namespace droneloc
