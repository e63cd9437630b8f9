#include "droneloc/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "droneloc/config.hpp"
#include "droneloc/csv.hpp"
#include "droneloc/error_models.hpp"
#include "droneloc/mission.hpp"
#include "droneloc/trilateration.hpp"

#ifndef DRONELOC_VERSION
#define DRONELOC_VERSION "0.0.0"
#endif

namespace droneloc {

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_number(std::string_view v, std::string_view what) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw UsageError("invalid " + std::string(what) + " '" + std::string(v) + "'");
  }
  return out;
}

// Writes to `path`, or to `fallback` when the path is empty.
template <typename Fn>
void with_output(const std::string& path, std::ostream& fallback, Fn&& fn) {
  if (path.empty()) {
    fn(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write '" + path + "'");
  fn(file);
  if (!file) throw std::runtime_error("error writing '" + path + "'");
}

RunConfig load_with_overrides(const std::string& path, const std::vector<std::string>& sets) {
  RunConfig cfg = path.empty() ? RunConfig{} : load_config(path);
  for (const std::string& s : sets) {
    try {
      apply_override(cfg, s);
    } catch (const ConfigError& e) {
      throw UsageError(std::string("--set: ") + e.what());
    }
  }
  return cfg;
}

struct BoundsArgs {
  double eps_s = 0.0, gamma_d = 0.0, gamma_h = 0.0, h = 0.0, beta_min = 60.0;
  std::vector<double> d;
  std::string out;
};

void cmd_bounds(const BoundsArgs& a, std::ostream& out) {
  if (a.d.empty()) throw UsageError("--d needs at least one value");
  for (double d : a.d) {
    if (!(d > 0.0)) throw UsageError("--d values must be positive");
  }
  if (!(a.h >= 0.0)) throw UsageError("--h must be non-negative");
  if (!(a.eps_s >= 0.0 && a.gamma_d >= 0.0 && a.gamma_h >= 0.0)) {
    throw UsageError("accuracies must be non-negative");
  }
  if (!(a.beta_min > 0.0 && a.beta_min <= 60.0)) throw UsageError("--beta-min must lie in (0, 60]");
  const AccuracyProfile profile{a.eps_s, a.gamma_d, a.gamma_h};
  with_output(a.out, out, [&](std::ostream& o) {
    o << "h,d,instrumental,rolling,altitude,combined,trilateration\n";
    for (double d : a.d) {
      const GroundErrorBound b = bound_combined(profile, a.h, d);
      const double t = trilateration_accuracy(profile, a.h, d, deg_to_rad(a.beta_min));
      const std::string row[] = {format_number(a.h),          format_number(d),
                                 format_number(b.instrumental), format_number(b.rolling),
                                 format_number(b.altitude),     format_number(b.combined),
                                 format_number(t)};
      write_row(o, row);
    }
  });
}

struct SimulateArgs {
  std::string config;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> threads;
  std::string out_dir = ".";
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunConfig simulate_config(const SimulateArgs& a) {
  RunConfig cfg = load_with_overrides(a.config, a.sets);
  if (a.seed) cfg.mission.seed = *a.seed;
  if (a.trials) cfg.mission.trials = *a.trials;
  if (a.threads) cfg.mission.threads = *a.threads;
  try {
    cfg.resolved().validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

void cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const RunConfig cfg = simulate_config(a);
  const MissionConfig mission = cfg.resolved();
  const auto results = run_mission(mission, deployment_for(mission), cfg.algorithms, true);

  fs::create_directories(a.out_dir);
  const fs::path dir(a.out_dir);
  const std::string meas = (dir / "measurements.csv").string();
  const std::string res = (dir / "results.csv").string();
  with_output(meas, out, [&](std::ostream& o) { write_measurements(o, results); });
  with_output(res, out, [&](std::ostream& o) { write_results(o, results); });

  nlohmann::ordered_json manifest;
  manifest["tool"] = "droneloc";
  manifest["version"] = DRONELOC_VERSION;
  manifest["seed"] = mission.seed;
  manifest["timestamp"] = utc_timestamp();
  manifest["config"] = serialize_config(cfg);
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  for (const std::string& f : {meas, res}) {
    files.push_back({{"name", fs::path(f).filename().string()},
                     {"sha256", sha256_file(f)},
                     {"bytes", fs::file_size(f)}});
  }
  manifest["files"] = files;
  with_output((dir / "manifest.json").string(), out,
              [&](std::ostream& o) { o << manifest.dump(2) << '\n'; });

  std::size_t rows = 0;
  for (const auto& r : results) rows += r.estimates.size();
  out << "wrote " << rows << " result rows to " << a.out_dir << '\n';
}

struct CompareArgs {
  std::string config;
  std::vector<std::string> sets;
  std::string sweep;
  std::vector<std::string> results;
  std::string axis = "file";
  std::optional<int> trials;
  std::optional<int> threads;
  std::string out;
};

std::vector<SweepRow> compare_files(const CompareArgs& a) {
  std::vector<SweepRow> rows;
  std::size_t total = 0;
  for (std::size_t i = 0; i < a.results.size(); ++i) {
    std::string path = a.results[i];
    double value = static_cast<double>(i);
    const auto colon = path.rfind(':');
    if (colon != std::string::npos && colon + 1 < path.size()) {
      value = parse_number(std::string_view(path).substr(colon + 1), "results value");
      path.resize(colon);
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open results '" + path + "'");
    const CsvTable table = read_csv(in, path);
    std::string header;
    for (const auto& h : table.header) header += (header.empty() ? "" : ",") + h;
    if (header != kResultColumns) {
      throw std::runtime_error(path + ": schema mismatch, expected '" +
                               std::string(kResultColumns) + "'");
    }
    total += table.rows.size();
    std::map<Algorithm, std::pair<std::vector<double>, std::size_t>> groups;
    for (const auto& row : table.rows) {
      Algorithm alg{};
      try {
        alg = parse_algorithm(row[2]);
      } catch (const std::invalid_argument& e) {
        throw std::runtime_error(path + ": " + e.what());
      }
      auto& g = groups[alg];
      ++g.second;
      if (!row[6].empty()) {
        double e = 0.0;
        const auto [ptr, ec] = std::from_chars(row[6].data(), row[6].data() + row[6].size(), e);
        if (ec != std::errc{} || ptr != row[6].data() + row[6].size()) {
          throw std::runtime_error(path + ": bad e_l value '" + row[6] + "'");
        }
        g.first.push_back(e);
      }
    }
    for (Algorithm alg : kAllAlgorithms) {
      const auto it = groups.find(alg);
      if (it == groups.end()) continue;
      rows.push_back({value, alg, summarize(it->second.first), it->second.second});
    }
  }
  if (total == 0) throw std::runtime_error("results input is empty");
  return rows;
}

std::vector<SweepRow> compare_sweep(const CompareArgs& a, std::string& axis_name) {
  const auto eq = a.sweep.find('=');
  if (eq == std::string::npos) throw UsageError("--sweep must look like axis=v1,v2,...");
  SweepAxis axis{};
  try {
    axis = parse_sweep_axis(a.sweep.substr(0, eq));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  axis_name = std::string(to_string(axis));
  std::vector<double> values;
  std::string_view rest = std::string_view(a.sweep).substr(eq + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    values.push_back(parse_number(rest.substr(0, comma), "sweep value"));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (values.empty()) throw UsageError("--sweep needs at least one value");
  RunConfig cfg = load_with_overrides(a.config, a.sets);
  if (a.trials) cfg.mission.trials = *a.trials;
  if (a.threads) cfg.mission.threads = *a.threads;
  MissionConfig mission = cfg.resolved();
  try {
    mission.validate();
    for (double v : values) apply_axis(mission, axis, v);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return sweep(mission, cfg.algorithms, axis, values);
}

void cmd_compare(const CompareArgs& a, std::ostream& out) {
  if (a.sweep.empty() == a.results.empty()) {
    throw UsageError("compare needs either --sweep or --results");
  }
  std::string axis = a.axis;
  const std::vector<SweepRow> rows = a.sweep.empty() ? compare_files(a) : compare_sweep(a, axis);
  with_output(a.out, out, [&](std::ostream& o) { write_summary(o, axis, rows); });
}

struct PathsArgs {
  std::string config;
  std::vector<std::string> sets;
  std::string out;
};

void cmd_paths(const PathsArgs& a, std::ostream& out) {
  const RunConfig cfg = load_with_overrides(a.config, a.sets);
  const auto path = generate_scan_path(cfg.resolved());
  with_output(a.out, out, [&](std::ostream& o) { write_waypoints(o, path); });
}

}  // namespace

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("sha256 unavailable");
  }
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  static constexpr char hex[] = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < len; ++i) {
    s += hex[md[i] >> 4];
    s += hex[md[i] & 15];
  }
  return s;
}

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Drone range localization simulator", "droneloc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", DRONELOC_VERSION);

  BoundsArgs bounds;
  auto* b = app.add_subcommand("bounds", "Ground and trilateration error bounds");
  b->set_help_flag("--help", "Print this help message and exit");  // keeps --h free
  b->add_option("--eps-s", bounds.eps_s, "Instrumental accuracy (m)");
  b->add_option("--gamma-d", bounds.gamma_d, "Rolling accuracy (m)");
  b->add_option("--gamma-h", bounds.gamma_h, "Altitude accuracy (m)");
  b->add_option("--h", bounds.h, "Altitude (m)");
  b->add_option("--d", bounds.d, "Ground distances (m)")->required()->delimiter(',');
  b->add_option("--beta-min", bounds.beta_min, "Smallest bearing angle (deg)");
  b->add_option("--out", bounds.out, "Output CSV (default stdout)");

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Run Monte Carlo missions");
  s->add_option("--config", sim.config, "Config file")->required();
  s->add_option("--set", sim.sets, "Override section.key=value");
  s->add_option("--seed", sim.seed, "Random seed");
  s->add_option("--trials", sim.trials, "Number of trials");
  s->add_option("--threads", sim.threads, "Worker threads (0 = all cores)");
  s->add_option("--out-dir", sim.out_dir, "Output directory");

  CompareArgs cmp;
  auto* c = app.add_subcommand("compare", "Aggregate errors per algorithm");
  c->add_option("--config", cmp.config, "Config file for --sweep");
  c->add_option("--set", cmp.sets, "Override section.key=value");
  c->add_option("--sweep", cmp.sweep, "axis=v1,v2,... with axis in d, beta, h, h_over_d");
  c->add_option("--results", cmp.results, "results.csv files, optionally FILE:VALUE");
  c->add_option("--axis", cmp.axis, "Axis label for --results");
  c->add_option("--trials", cmp.trials, "Number of trials per sweep value");
  c->add_option("--threads", cmp.threads, "Worker threads");
  c->add_option("--out", cmp.out, "Output CSV (default stdout)");

  PathsArgs paths;
  auto* p = app.add_subcommand("paths", "List the flight path waypoints");
  p->add_option("--config", paths.config, "Config file");
  p->add_option("--set", paths.sets, "Override section.key=value");
  p->add_option("--out", paths.out, "Output CSV (default stdout)");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (b->parsed()) cmd_bounds(bounds, out);
    if (s->parsed()) cmd_simulate(sim, out);
    if (c->parsed()) cmd_compare(cmp, out);
    if (p->parsed()) cmd_paths(paths, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace droneloc
