#include "droneloc/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace droneloc {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigError("expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

template <typename Int>
Int to_int(std::string_view v) {
  Int out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError("expected an integer, got '" + std::string(v) + "'");
  }
  return out;
}

std::string fmt(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

struct Key {
  std::string_view section;
  std::string_view name;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::optional<std::string>(const RunConfig&)> get;
};

#define DL_NUM(SEC, NAME, FIELD)                                               \
  Key {                                                                        \
    SEC, NAME, [](RunConfig& c, std::string_view v) { c.FIELD = to_double(v); }, \
        [](const RunConfig& c) -> std::optional<std::string> { return fmt(c.FIELD); } \
  }

const std::vector<Key>& keys() {
  static const std::vector<Key> table{
      DL_NUM("area", "width", mission.width),
      DL_NUM("area", "height", mission.height),
      DL_NUM("path", "altitude", mission.altitude),
      DL_NUM("path", "inter_waypoint", mission.inter_waypoint),
      DL_NUM("path", "scan_spacing", mission.scan_spacing),
      DL_NUM("path", "overfly", mission.overfly),
      DL_NUM("path", "home_x", mission.home.x),
      DL_NUM("path", "home_y", mission.home.y),
      DL_NUM("deployment", "side", mission.gd_side),
      Key{"deployment", "count",
          [](RunConfig& c, std::string_view v) { c.mission.gd_count = to_int<int>(v); },
          [](const RunConfig& c) -> std::optional<std::string> {
            return std::to_string(c.mission.gd_count);
          }},
      DL_NUM("deployment", "origin_x", mission.gd_origin.x),
      DL_NUM("deployment", "origin_y", mission.gd_origin.y),
      Key{"channel", "environment",
          [](RunConfig& c, std::string_view v) {
            try {
              c.mission.environment = parse_environment(v);
            } catch (const std::invalid_argument& e) {
              throw ConfigError(e.what());
            }
          },
          [](const RunConfig& c) -> std::optional<std::string> {
            return std::string(to_string(c.mission.environment));
          }},
      DL_NUM("channel", "los_range", mission.budget.los_range),
      DL_NUM("channel", "nlos_range", mission.budget.nlos_range),
      Key{"noise", "profile",
          [](RunConfig& c, std::string_view v) {
            if (v == "paper-fit") {
              c.mission.paper_fit = true;
            } else if (v == "custom") {
              c.mission.paper_fit = false;
            } else {
              throw ConfigError("profile must be 'paper-fit' or 'custom', got '" +
                                std::string(v) + "'");
            }
          },
          [](const RunConfig& c) -> std::optional<std::string> {
            return std::string(c.mission.paper_fit ? "paper-fit" : "custom");
          }},
      DL_NUM("noise", "eps_s", mission.profile.eps_s),
      DL_NUM("noise", "gamma_d", mission.profile.gamma_d),
      DL_NUM("noise", "gamma_h", mission.profile.gamma_h),
      Key{"noise", "model",
          [](RunConfig& c, std::string_view v) {
            try {
              c.mission.noise = parse_noise_model(v);
            } catch (const std::invalid_argument& e) {
              throw ConfigError(e.what());
            }
          },
          [](const RunConfig& c) -> std::optional<std::string> {
            return std::string(to_string(c.mission.noise));
          }},
      DL_NUM("selection", "d", mission.constraints.target_d),
      DL_NUM("selection", "tolerance", mission.constraints.tolerance),
      DL_NUM("selection", "beta_deg", beta_deg),
      Key{"selection", "d_min",
          [](RunConfig& c, std::string_view v) { c.d_min = to_double(v); },
          [](const RunConfig& c) -> std::optional<std::string> {
            if (!c.d_min) return std::nullopt;
            return fmt(*c.d_min);
          }},
      Key{"estimators", "algorithms",
          [](RunConfig& c, std::string_view v) {
            std::vector<Algorithm> out;
            while (!v.empty()) {
              const auto comma = v.find(',');
              const std::string_view item = trim(v.substr(0, comma));
              try {
                out.push_back(parse_algorithm(item));
              } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
              }
              if (comma == std::string_view::npos) break;
              v.remove_prefix(comma + 1);
            }
            if (out.empty()) throw ConfigError("algorithm list is empty");
            c.algorithms = out;
          },
          [](const RunConfig& c) -> std::optional<std::string> {
            std::string s;
            for (Algorithm a : c.algorithms) {
              if (!s.empty()) s += ",";
              s += to_string(a);
            }
            return s;
          }},
      DL_NUM("estimators", "region_resolution", mission.region_resolution),
      Key{"run", "trials",
          [](RunConfig& c, std::string_view v) { c.mission.trials = to_int<int>(v); },
          [](const RunConfig& c) -> std::optional<std::string> {
            return std::to_string(c.mission.trials);
          }},
      Key{"run", "seed",
          [](RunConfig& c, std::string_view v) { c.mission.seed = to_int<std::uint64_t>(v); },
          [](const RunConfig& c) -> std::optional<std::string> {
            return std::to_string(c.mission.seed);
          }},
      Key{"run", "threads",
          [](RunConfig& c, std::string_view v) { c.mission.threads = to_int<int>(v); },
          [](const RunConfig& c) -> std::optional<std::string> {
            return std::to_string(c.mission.threads);
          }},
  };
  return table;
}

#undef DL_NUM

const Key* find_key(std::string_view section, std::string_view name) {
  for (const Key& k : keys()) {
    if (k.section == section && k.name == name) return &k;
  }
  return nullptr;
}

bool known_section(std::string_view section) {
  for (const Key& k : keys()) {
    if (k.section == section) return true;
  }
  return false;
}

}  // namespace

MissionConfig RunConfig::resolved() const {
  MissionConfig m = mission;
  m.constraints.min_beta = deg_to_rad(beta_deg);
  m.constraints.d_min = d_min ? *d_min : std::max(0.0, m.constraints.target_d - m.constraints.tolerance);
  return m;
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return serialize_config(a) == serialize_config(b);
}

RunConfig parse_config(std::string_view text, std::string_view source) {
  RunConfig cfg;
  std::string section;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    auto where = [&] { return std::string(source) + ":" + std::to_string(line_no) + ": "; };

    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where() + "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!known_section(section)) throw ConfigError(where() + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where() + "expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (section.empty()) throw ConfigError(where() + "key outside of a section");
    const Key* k = find_key(section, key);
    if (!k) {
      throw ConfigError(where() + "unknown key '" + std::string(key) + "' in [" + section + "]");
    }
    try {
      k->set(cfg, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where() + e.what());
    }
  }
  try {
    cfg.resolved().validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

void apply_override(RunConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq) {
    throw ConfigError("override must look like section.key=value, got '" +
                      std::string(assignment) + "'");
  }
  const std::string_view section = trim(assignment.substr(0, dot));
  const std::string_view key = trim(assignment.substr(dot + 1, eq - dot - 1));
  const Key* k = find_key(section, key);
  if (!k) throw ConfigError("unknown key '" + std::string(assignment.substr(0, eq)) + "'");
  k->set(cfg, trim(assignment.substr(eq + 1)));
  try {
    cfg.resolved().validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::string serialize_config(const RunConfig& cfg) {
  std::string out;
  std::string_view section;
  for (const Key& k : keys()) {
    const auto value = k.get(cfg);
    if (!value) continue;
    if (k.section != section) {
      if (!section.empty()) out += "\n";
      section = k.section;
      out += "[" + std::string(section) + "]\n";
    }
    out += std::string(k.name) + " = " + *value + "\n";
  }
  return out;
}

}  // namespace droneloc
