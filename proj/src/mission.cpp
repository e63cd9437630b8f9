#include "droneloc/mission.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "droneloc/rng.hpp"

namespace droneloc {

void MissionConfig::validate() const {
  if (!(width > 0.0 && height > 0.0)) throw std::invalid_argument("area must be positive");
  if (!(altitude >= 0.0)) throw std::invalid_argument("altitude must be non-negative");
  if (!(inter_waypoint > 0.0)) throw std::invalid_argument("inter_waypoint must be positive");
  if (!(scan_spacing > 0.0)) throw std::invalid_argument("scan_spacing must be positive");
  if (!(overfly >= 0.0)) throw std::invalid_argument("overfly must be non-negative");
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (threads < 0) throw std::invalid_argument("threads must be non-negative");
  if (!(region_resolution > 0.0)) throw std::invalid_argument("region resolution must be positive");
  if (!(gd_side > 0.0)) throw std::invalid_argument("gd side must be positive");
  if (gd_count < 1) throw std::invalid_argument("gd count must be at least 1");
  budget.validate();
  profile.validate();
  constraints.validate();
}

AccuracyProfile MissionConfig::effective_profile() const {
  return paper_fit ? paper_fit_profile(altitude) : profile;
}

Deployment deploy_triangular(double side, int count, GroundPoint origin) {
  if (!(side > 0.0)) throw std::invalid_argument("lattice side must be positive");
  if (count < 0) throw std::invalid_argument("count must be non-negative");
  Deployment dep;
  const GroundPoint e1{side, 0.0};
  const GroundPoint e2{side / 2.0, side * std::sqrt(3.0) / 2.0};
  for (int shell = 0; static_cast<int>(dep.devices.size()) < count; ++shell) {
    for (int j = 0; j <= shell && static_cast<int>(dep.devices.size()) < count; ++j) {
      const int i = shell - j;
      const auto id = static_cast<std::int64_t>(dep.devices.size());
      dep.devices.push_back({id, origin + static_cast<double>(i) * e1 + static_cast<double>(j) * e2});
    }
  }
  return dep;
}

Deployment deployment_for(const MissionConfig& cfg) {
  return deploy_triangular(cfg.gd_side, cfg.gd_count, cfg.gd_origin);
}

std::vector<Waypoint> generate_scan_path(const MissionConfig& cfg) {
  cfg.validate();
  std::vector<Waypoint> path;
  auto emit = [&](GroundPoint p, int line) {
    path.push_back({p, cfg.altitude, static_cast<std::int64_t>(path.size()), line});
  };
  // Appends the leg from the last waypoint to `to`, excluding its start.
  auto leg = [&](GroundPoint to, int line) {
    const GroundPoint from = path.back().position;
    const double len = distance(from, to);
    if (len == 0.0) {
      if (line >= 0) path.back().scan_line = line;
      return;
    }
    const auto steps = static_cast<long>(std::ceil(len / cfg.inter_waypoint - 1e-9));
    if (line >= 0) path.back().scan_line = line;
    for (long s = 1; s <= steps; ++s) {
      const double t = static_cast<double>(s) / static_cast<double>(steps);
      emit(s == steps ? to : from + t * (to - from), line);
    }
  };

  emit(cfg.home, -1);
  // A last, narrower strip still gets a scan along the far edge.
  const auto scans = static_cast<int>(std::ceil(cfg.width / cfg.scan_spacing - 1e-9)) + 1;
  for (int k = 0; k < scans; ++k) {
    const double x = std::min(k * cfg.scan_spacing, cfg.width);
    const bool up = k % 2 == 0;
    const double lo = -cfg.overfly, hi = cfg.height + cfg.overfly;
    const GroundPoint start{x, up ? lo : hi};
    const GroundPoint end{x, up ? hi : lo};
    leg(start, -1);
    leg(end, k);
  }
  leg(cfg.home, -1);
  return path;
}

TrialResult run_trial(const MissionConfig& cfg, const Deployment& deployment,
                      std::span<const Waypoint> path, std::span<const Algorithm> algorithms,
                      int trial, bool keep_measurements) {
  const AccuracyProfile profile = cfg.effective_profile();
  const auto t = static_cast<std::uint64_t>(trial);

  // The drone's drift at a waypoint is shared by every listening device.
  std::vector<NoiseSample> drift(path.size());
  for (std::size_t k = 0; k < path.size(); ++k) {
    Rng rng = substream(cfg.seed, {t, 1, static_cast<std::uint64_t>(path[k].id)});
    sample_drift(profile, rng, cfg.noise, drift[k]);
  }

  TrialResult result;
  result.trial = trial;
  std::vector<RangeMeasurement> log;
  for (const GroundDevice& gd : deployment.devices) {
    log.clear();
    for (std::size_t k = 0; k < path.size(); ++k) {
      const Waypoint& w = path[k];
      Rng rng = substream(cfg.seed, {t, 2, static_cast<std::uint64_t>(gd.id),
                                     static_cast<std::uint64_t>(w.id)});
      const double ground = ground_distance(w, gd.position);
      const double slant = slant_distance(w, gd.position);
      const double ratio =
          ground > 0.0 ? w.altitude / ground : std::numeric_limits<double>::infinity();
      if (!link_up(cfg.environment, cfg.budget, slant, ratio, rng)) continue;
      NoiseSample noise = drift[k];
      noise.e_s = sample_ranging_error(profile.eps_s, rng, cfg.noise);
      const RangeMeasurement m = make_measurement(w, measure(w, gd.position, noise));
      log.push_back(m);
      if (keep_measurements) {
        result.measurements.push_back(
            {gd.id, w, m.measured_slant, m.clamped, m.projected_ground - ground});
      }
    }
    for (Algorithm a : algorithms) {
      EstimateRecord rec;
      rec.gd_id = gd.id;
      rec.algorithm = a;
      try {
        rec.outcome = estimate(a, log, cfg.constraints, cfg.region_resolution);
      } catch (const CollinearAnchors&) {
        rec.outcome = EstimateOutcome{};
        rec.outcome.status = EstimateStatus::degenerate;
      }
      if (rec.outcome.status == EstimateStatus::ok && rec.outcome.estimate) {
        rec.error = distance(*rec.outcome.estimate, gd.position);
      }
      result.estimates.push_back(std::move(rec));
    }
  }
  return result;
}

std::vector<TrialResult> run_mission(const MissionConfig& cfg, const Deployment& deployment,
                                     std::span<const Algorithm> algorithms,
                                     bool keep_measurements) {
  cfg.validate();
  if (deployment.devices.empty()) throw std::invalid_argument("deployment is empty");
  if (algorithms.empty()) throw std::invalid_argument("no algorithms requested");
  for (const GroundDevice& gd : deployment.devices) {
    const GroundPoint p = gd.position;
    if (p.x < -1e-9 || p.y < -1e-9 || p.x > cfg.width + 1e-9 || p.y > cfg.height + 1e-9) {
      throw std::invalid_argument("device " + std::to_string(gd.id) + " lies outside the area");
    }
  }
  const std::vector<Waypoint> path = generate_scan_path(cfg);
  std::vector<TrialResult> results(static_cast<std::size_t>(cfg.trials));

  unsigned workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                     : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(cfg.trials));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (int i = next++; i < cfg.trials; i = next++) {
      try {
        results[static_cast<std::size_t>(i)] =
            run_trial(cfg, deployment, path, algorithms, i, keep_measurements);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::d: return "d";
    case SweepAxis::beta: return "beta";
    case SweepAxis::h: return "h";
    case SweepAxis::h_over_d: return "h_over_d";
  }
  return "?";
}

SweepAxis parse_sweep_axis(std::string_view text) {
  for (auto a : {SweepAxis::d, SweepAxis::beta, SweepAxis::h, SweepAxis::h_over_d}) {
    if (to_string(a) == text) return a;
  }
  throw std::invalid_argument("unknown sweep axis '" + std::string(text) + "'");
}

MissionConfig apply_axis(const MissionConfig& cfg, SweepAxis axis, double value) {
  MissionConfig out = cfg;
  switch (axis) {
    case SweepAxis::d: {
      const double shift = value - cfg.constraints.target_d;
      out.constraints.target_d = value;
      out.constraints.d_min = std::max(0.0, cfg.constraints.d_min + shift);
      break;
    }
    case SweepAxis::beta:
      out.constraints.min_beta = deg_to_rad(value);
      break;
    case SweepAxis::h:
      out.altitude = value;
      break;
    case SweepAxis::h_over_d: {
      const double ratio = cfg.altitude / cfg.constraints.target_d;
      if (!(ratio > 0.0)) throw std::invalid_argument("h_over_d sweep needs a positive h/d");
      out.altitude = value;
      out = apply_axis(out, SweepAxis::d, value / ratio);
      break;
    }
  }
  out.validate();
  return out;
}

std::vector<SweepRow> aggregate(std::span<const TrialResult> results,
                                std::span<const Algorithm> algorithms, double value) {
  std::vector<SweepRow> rows;
  for (Algorithm a : algorithms) {
    std::vector<double> errors;
    std::size_t attempts = 0;
    for (const TrialResult& r : results) {
      for (const EstimateRecord& e : r.estimates) {
        if (e.algorithm != a) continue;
        ++attempts;
        if (e.error) errors.push_back(*e.error);
      }
    }
    rows.push_back({value, a, summarize(errors), attempts});
  }
  return rows;
}

std::vector<SweepRow> sweep(const MissionConfig& cfg, std::span<const Algorithm> algorithms,
                            SweepAxis axis, std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("sweep needs at least one value");
  std::vector<SweepRow> rows;
  for (double v : values) {
    const MissionConfig point = apply_axis(cfg, axis, v);
    const auto results = run_mission(point, deployment_for(point), algorithms, false);
    for (SweepRow& row : aggregate(results, algorithms, v)) rows.push_back(row);
  }
  return rows;
}

}  // namespace droneloc
