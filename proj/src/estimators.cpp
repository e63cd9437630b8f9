#include "droneloc/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include "droneloc/region.hpp"

namespace droneloc {

void SelectionConstraints::validate() const {
  if (!(target_d > 0.0)) throw std::invalid_argument("target_d must be positive");
  if (!(tolerance >= 0.0)) throw std::invalid_argument("tolerance must be non-negative");
  if (!(min_beta >= 0.0 && min_beta <= kPi / 3.0 + 1e-12)) {
    throw std::invalid_argument("min_beta must lie in [0, pi/3]");
  }
  if (!(d_min >= 0.0)) throw std::invalid_argument("d_min must be non-negative");
}

std::string_view to_string(EstimateStatus status) {
  switch (status) {
    case EstimateStatus::ok: return "ok";
    case EstimateStatus::no_valid_triple: return "no-valid-triple";
    case EstimateStatus::ambiguous: return "ambiguous";
    case EstimateStatus::degenerate: return "degenerate";
  }
  return "?";
}

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::omni: return "omni";
    case Algorithm::scan: return "scan";
    case Algorithm::drbc: return "drb-c";
    case Algorithm::drf: return "drf";
    case Algorithm::ioc: return "ioc";
    case Algorithm::ioa: return "ioa";
  }
  return "?";
}

EstimateStatus parse_status(std::string_view text) {
  for (auto s : {EstimateStatus::ok, EstimateStatus::no_valid_triple, EstimateStatus::ambiguous,
                 EstimateStatus::degenerate}) {
    if (to_string(s) == text) return s;
  }
  throw std::invalid_argument("unknown status '" + std::string(text) + "'");
}

Algorithm parse_algorithm(std::string_view text) {
  for (Algorithm a : kAllAlgorithms) {
    if (to_string(a) == text) return a;
  }
  if (text == "drbc") return Algorithm::drbc;
  throw std::invalid_argument("unknown algorithm '" + std::string(text) + "'");
}

namespace {

using Triple = std::array<const RangeMeasurement*, 3>;

double beta_at(const GroundPoint& p, const Triple& t) {
  try {
    return beta_angles(p, t[0]->waypoint.position, t[1]->waypoint.position,
                       t[2]->waypoint.position)
        .beta_min();
  } catch (const GeometryError&) {
    return 0.0;
  }
}

bool anchors_collinear(const Triple& t) {
  return min_interior_angle(t[0]->waypoint.position, t[1]->waypoint.position,
                            t[2]->waypoint.position) < kCollinearThreshold;
}

std::optional<GroundPoint> closed_form(const Triple& t) {
  try {
    return linearized_position(
        {t[0]->waypoint.position, t[1]->waypoint.position, t[2]->waypoint.position},
        {t[0]->projected_ground, t[1]->projected_ground, t[2]->projected_ground});
  } catch (const CollinearAnchors&) {
    return std::nullopt;
  }
}

std::vector<const RangeMeasurement*> by_id(std::span<const RangeMeasurement> ms) {
  std::vector<const RangeMeasurement*> out;
  out.reserve(ms.size());
  for (const auto& m : ms) {
    if (!m.clamped) out.push_back(&m);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto* a, const auto* b) {
    return a->waypoint.id < b->waypoint.id;
  });
  return out;
}

EstimateOutcome solve_triple(const Triple& t, double beta, std::optional<GroundPoint> guess) {
  EstimateOutcome out;
  const TrilaterationResult r = trilaterate(*t[0], *t[1], *t[2], guess);
  out.estimate = r.estimate;
  out.status = EstimateStatus::ok;
  out.converged = r.converged;
  out.beta_min = beta;
  for (const auto* m : t) out.used_waypoints.push_back(m->waypoint.id);
  return out;
}

// Smallest circular gap of three orientations on a circle of length pi.
double min_gap(double a, double b, double c) {
  std::array<double, 3> o{a, b, c};
  std::sort(o.begin(), o.end());
  return std::min({o[1] - o[0], o[2] - o[1], kPi - (o[2] - o[0])});
}

bool lex_less(std::array<std::int64_t, 3> a, std::array<std::int64_t, 3> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a < b;
}

}  // namespace

std::optional<SelectedTriple> select_triple(std::span<const RangeMeasurement> measurements,
                                            const SelectionConstraints& c,
                                            std::optional<GroundPoint> reference) {
  std::vector<const RangeMeasurement*> band;
  for (const auto* m : by_id(measurements)) {
    if (c.in_band(m->projected_ground)) band.push_back(m);
  }
  const double floor = std::max(c.min_beta, kCollinearThreshold);
  std::optional<SelectedTriple> best;
  const std::size_t n = band.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        const Triple t{band[i], band[j], band[k]};
        if (anchors_collinear(t)) continue;
        const std::optional<GroundPoint> at = reference ? reference : closed_form(t);
        if (!at) continue;
        const double beta = beta_at(*at, t);
        if (beta < floor) continue;
        if (!best || beta > best->beta_min + 1e-12) {
          best = SelectedTriple{{*t[0], *t[1], *t[2]}, beta};
        }
      }
    }
  }
  return best;
}

std::optional<std::array<std::size_t, 3>> best_geometry_triple(
    std::span<const BearingCandidate> candidates, double slack) {
  const std::size_t n = candidates.size();
  if (n < 3) return std::nullopt;

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return candidates[a].orientation < candidates[b].orientation;
  });
  // Doubled orientation array so every forward arc is a contiguous range.
  std::vector<double> theta(2 * n);
  for (std::size_t p = 0; p < n; ++p) {
    theta[p] = candidates[order[p]].orientation;
    theta[p + n] = theta[p] + kPi;
  }
  auto orient = [&](std::size_t p) { return theta[p]; };
  auto gap_of = [&](std::size_t a, std::size_t b, std::size_t c) {
    return min_gap(orient(a), orient(b), orient(c));
  };

  // Best achievable beta_min: for every ordered pair (i, j) the third line
  // sits in the forward arc from j back to i; the line nearest the arc's
  // midpoint is optimal for that pair.
  double best = -1.0;
  std::array<std::size_t, 3> best_pos{};
  for (std::size_t pi = 0; pi < n; ++pi) {
    for (std::size_t pj = 0; pj < n; ++pj) {
      if (pi == pj) continue;
      double g = theta[pj] - theta[pi];
      if (g < 0.0) g += kPi;
      if (g <= best) continue;
      const double mid = theta[pj] + 0.5 * (kPi - g);
      const auto lb = static_cast<std::ptrdiff_t>(
          std::lower_bound(theta.begin(), theta.end(), mid) - theta.begin());
      for (std::ptrdiff_t q = lb - 2; q <= lb + 1; ++q) {
        const std::size_t pk = static_cast<std::size_t>(((q % static_cast<std::ptrdiff_t>(n)) +
                                                         static_cast<std::ptrdiff_t>(n)) %
                                                        static_cast<std::ptrdiff_t>(n));
        if (pk == pi || pk == pj) continue;
        const double b = gap_of(pi, pj, pk);
        if (b > best) {
          best = b;
          best_pos = {pi, pj, pk};
        }
      }
    }
  }
  if (best < kCollinearThreshold) return std::nullopt;
  const double t = std::max(best - slack, kCollinearThreshold);

  // Largest smallest ground distance among triples with beta_min >= t.
  // Sparse table of the maximum ground over the doubled array.
  std::size_t levels = 1;
  while ((std::size_t{1} << levels) <= 2 * n) ++levels;
  std::vector<std::vector<std::size_t>> table(levels, std::vector<std::size_t>(2 * n));
  for (std::size_t p = 0; p < 2 * n; ++p) table[0][p] = p % n;
  for (std::size_t l = 1; l < levels; ++l) {
    const std::size_t half = std::size_t{1} << (l - 1);
    for (std::size_t p = 0; p + (std::size_t{1} << l) <= 2 * n; ++p) {
      const std::size_t a = table[l - 1][p], b = table[l - 1][p + half];
      table[l][p] = candidates[order[a]].ground >= candidates[order[b]].ground ? a : b;
    }
  }
  auto range_max = [&](std::size_t lo, std::size_t hi) {  // inclusive
    std::size_t l = 0;
    while ((std::size_t{1} << (l + 1)) <= hi - lo + 1) ++l;
    const std::size_t a = table[l][lo], b = table[l][hi + 1 - (std::size_t{1} << l)];
    return candidates[order[a]].ground >= candidates[order[b]].ground ? a : b;
  };

  double g_star = -std::numeric_limits<double>::infinity();
  std::array<std::size_t, 3> g_pos = best_pos;
  for (std::size_t pi = 0; pi < n; ++pi) {
    for (std::size_t pj = 0; pj < n; ++pj) {
      if (pi == pj) continue;
      double g = theta[pj] - theta[pi];
      if (g < 0.0) g += kPi;
      if (g < t) continue;
      const double pair_ground = std::min(candidates[order[pi]].ground, candidates[order[pj]].ground);
      if (pair_ground <= g_star) continue;
      const double lo_o = theta[pj] + t;
      const double hi_o = theta[pj] + kPi - g - t - 1e-12;
      if (hi_o < lo_o) continue;
      auto lo = static_cast<std::size_t>(
          std::lower_bound(theta.begin(), theta.end(), lo_o) - theta.begin());
      auto hi = static_cast<std::size_t>(
          std::upper_bound(theta.begin(), theta.end(), hi_o) - theta.begin());
      lo = std::max(lo, pj + 1);
      hi = std::min(hi, pj + n);  // exclusive
      if (lo >= hi) continue;
      const std::size_t pk = range_max(lo, hi - 1);
      if (pk == pi || pk == pj) continue;
      const double value = std::min(pair_ground, candidates[order[pk]].ground);
      if (value > g_star) {
        g_star = value;
        g_pos = {pi, pj, pk};
      }
    }
  }

  // Earliest ids among the qualifying triples attaining g_star.
  std::optional<std::array<std::size_t, 3>> chosen;
  std::array<std::int64_t, 3> chosen_ids{};
  for (std::size_t pe = 0; pe < n; ++pe) {
    if (candidates[order[pe]].ground != g_star) continue;
    for (std::size_t px = 0; px < n; ++px) {
      if (px == pe || candidates[order[px]].ground < g_star) continue;
      for (std::size_t pk = px + 1; pk < n; ++pk) {
        if (pk == pe || candidates[order[pk]].ground < g_star) continue;
        if (gap_of(pe, px, pk) < t - 1e-12) continue;
        const std::array<std::int64_t, 3> ids{candidates[order[pe]].id,
                                              candidates[order[px]].id,
                                              candidates[order[pk]].id};
        if (!chosen || lex_less(ids, chosen_ids)) {
          chosen = std::array<std::size_t, 3>{pe, px, pk};
          chosen_ids = ids;
        }
      }
    }
  }
  const std::array<std::size_t, 3> pos = chosen ? *chosen : g_pos;
  std::array<std::size_t, 3> out{order[pos[0]], order[pos[1]], order[pos[2]]};
  std::sort(out.begin(), out.end(),
            [&](std::size_t a, std::size_t b) { return candidates[a].id < candidates[b].id; });
  return out;
}

EstimateOutcome estimate_scan(std::span<const RangeMeasurement> measurements,
                              const SelectionConstraints& c) {
  std::vector<const RangeMeasurement*> band;
  for (const auto* m : by_id(measurements)) {
    if (m->waypoint.scan_line >= 0 && c.in_band(m->projected_ground)) band.push_back(m);
  }
  const double floor = std::max(c.min_beta, kCollinearThreshold);
  std::optional<Triple> fallback;
  double fallback_beta = -1.0;
  const std::size_t n = band.size();
  for (std::size_t k = 2; k < n; ++k) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        const Triple t{band[i], band[j], band[k]};
        const int li = t[0]->waypoint.scan_line, lj = t[1]->waypoint.scan_line,
                  lk = t[2]->waypoint.scan_line;
        if (li == lj && lj == lk) continue;
        if (anchors_collinear(t)) continue;
        const auto at = closed_form(t);
        if (!at) continue;
        const double beta = beta_at(*at, t);
        if (beta >= floor) return solve_triple(t, beta, std::nullopt);
        if (beta > fallback_beta) {
          fallback_beta = beta;
          fallback = t;
        }
      }
    }
  }
  if (!fallback || fallback_beta < kCollinearThreshold) return {};
  EstimateOutcome out = solve_triple(*fallback, fallback_beta, std::nullopt);
  out.degraded = true;
  return out;
}

EstimateOutcome estimate_omni(std::span<const RangeMeasurement> measurements,
                              const SelectionConstraints& c) {
  const auto all = by_id(measurements);
  std::vector<const RangeMeasurement*> band;
  for (const auto* m : all) {
    if (c.in_band(m->projected_ground)) band.push_back(m);
  }

  // Stage 1: the first triple in flight order whose geometry meets the
  // constraint at its own closed-form position, else the best one seen.
  const double floor = std::max(c.min_beta, kCollinearThreshold);
  auto first_fit = [&](const std::vector<const RangeMeasurement*>& pool) -> std::optional<Triple> {
    std::optional<Triple> best;
    double best_beta = kCollinearThreshold;
    for (std::size_t k = 2; k < pool.size(); ++k) {
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
          const Triple t{pool[i], pool[j], pool[k]};
          if (anchors_collinear(t)) continue;
          const auto at = closed_form(t);
          if (!at) continue;
          const double beta = beta_at(*at, t);
          if (beta >= floor) return t;
          if (beta > best_beta) {
            best_beta = beta;
            best = t;
          }
        }
      }
    }
    return best;
  };
  std::optional<Triple> coarse_triple = first_fit(band);
  if (!coarse_triple) {
    std::vector<const RangeMeasurement*> far;
    for (const auto* m : all) {
      if (m->projected_ground >= c.d_min) far.push_back(m);
    }
    coarse_triple = first_fit(far);
  }
  if (!coarse_triple) return {};
  const TrilaterationResult coarse = trilaterate(*(*coarse_triple)[0], *(*coarse_triple)[1],
                                                 *(*coarse_triple)[2]);

  // Stage 2: best bearing geometry around the coarse position.
  std::vector<const RangeMeasurement*> pool;
  std::vector<BearingCandidate> bearings;
  for (const auto* m : all) {
    if (m->projected_ground < c.d_min) continue;
    if (distance(m->waypoint.position, coarse.estimate) < 1e-9) continue;
    pool.push_back(m);
    bearings.push_back({line_orientation(coarse.estimate, m->waypoint.position),
                        m->projected_ground, m->waypoint.id});
  }
  const auto pick = best_geometry_triple(bearings, deg_to_rad(1.0));
  EstimateOutcome out;
  if (pick) {
    const Triple t{pool[(*pick)[0]], pool[(*pick)[1]], pool[(*pick)[2]]};
    if (!anchors_collinear(t)) {
      out = solve_triple(t, beta_at(coarse.estimate, t), std::nullopt);
    }
  }
  if (out.status != EstimateStatus::ok) {
    out = solve_triple(*coarse_triple, beta_at(coarse.estimate, *coarse_triple), std::nullopt);
    out.degraded = true;
  }
  out.coarse_estimate = coarse.estimate;
  if (out.beta_min < c.min_beta) out.degraded = true;
  return out;
}

EstimateOutcome drbc_from_triple(const RangeMeasurement& first, const RangeMeasurement& second,
                                 const RangeMeasurement& third, double tolerance) {
  EstimateOutcome out;
  out.used_waypoints = {first.waypoint.id, second.waypoint.id, third.waypoint.id};
  const GroundPoint c1 = first.waypoint.position, c2 = second.waypoint.position;
  const double r1 = first.projected_ground, r2 = second.projected_ground;
  const CircleIntersection hit = intersect_circles(c1, r1, c2, r2, 1e-12);
  if (hit.count == 0) {
    double half = 0.0;
    const GroundPoint p = tangency_repair(c1, r1, c2, r2, &half);
    if (!(half <= tolerance) || distance(c1, c2) == 0.0) {
      out.status = EstimateStatus::degenerate;
      return out;
    }
    out.estimate = p;
    out.status = EstimateStatus::ok;
    out.repaired = true;
    return out;
  }
  if (hit.count == 1) {
    out.estimate = hit.points[0];
    out.status = EstimateStatus::ok;
    return out;
  }
  const GroundPoint w3 = third.waypoint.position;
  const double e0 = std::abs(distance(hit.points[0], w3) - third.projected_ground);
  const double e1 = std::abs(distance(hit.points[1], w3) - third.projected_ground);
  if (std::abs(e0 - e1) <= 1e-9) {
    out.status = EstimateStatus::ambiguous;
    return out;
  }
  out.estimate = e0 < e1 ? hit.points[0] : hit.points[1];
  out.status = EstimateStatus::ok;
  return out;
}

namespace {

// Angle between the two bearing lines at an intersection of the circles,
// folded into [0, pi/2].
double crossing_angle(const RangeMeasurement& a, const RangeMeasurement& b) {
  const double dist = distance(a.waypoint.position, b.waypoint.position);
  const double r1 = a.projected_ground, r2 = b.projected_ground;
  if (r1 <= 0.0 || r2 <= 0.0 || dist <= 0.0) return 0.0;
  const double cosv = std::clamp((r1 * r1 + r2 * r2 - dist * dist) / (2.0 * r1 * r2), -1.0, 1.0);
  const double phi = std::acos(cosv);
  return std::min(phi, kPi - phi);
}

bool circles_meet(const RangeMeasurement& a, const RangeMeasurement& b, double tolerance) {
  const double dist = distance(a.waypoint.position, b.waypoint.position);
  if (dist == 0.0) return false;
  const double r1 = a.projected_ground, r2 = b.projected_ground;
  const double gap = std::max(dist - r1 - r2, std::abs(r1 - r2) - dist);
  return gap <= 2.0 * tolerance;
}

// The measurement that best separates two mirror candidates.
const RangeMeasurement* separating_third(const std::vector<const RangeMeasurement*>& pool,
                                         const GroundPoint& p, const GroundPoint& q,
                                         std::span<const std::int64_t> exclude) {
  const RangeMeasurement* best = nullptr;
  double best_gap = -1.0;
  for (const auto* m : pool) {
    if (std::find(exclude.begin(), exclude.end(), m->waypoint.id) != exclude.end()) continue;
    const double gap =
        std::abs(distance(m->waypoint.position, p) - distance(m->waypoint.position, q));
    // Near-equal gaps go to the earliest waypoint so that rounding cannot
    // decide the pick.
    if (gap > best_gap + 1e-9) {
      best_gap = gap;
      best = m;
    }
  }
  return best;
}

}  // namespace

EstimateOutcome estimate_drbc(std::span<const RangeMeasurement> measurements,
                              const SelectionConstraints& c) {
  const auto all = by_id(measurements);
  std::vector<const RangeMeasurement*> band;
  for (const auto* m : all) {
    if (c.in_band(m->projected_ground)) band.push_back(m);
  }
  const double floor = std::max(c.min_beta, kCollinearThreshold);
  std::optional<std::pair<const RangeMeasurement*, const RangeMeasurement*>> chosen, fallback;
  double fallback_angle = -1.0;
  for (std::size_t j = 1; j < band.size() && !chosen; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (!circles_meet(*band[i], *band[j], c.tolerance)) continue;
      const double angle = crossing_angle(*band[i], *band[j]);
      if (angle >= floor) {
        chosen = std::pair{band[i], band[j]};
        break;
      }
      if (angle > fallback_angle) {
        fallback_angle = angle;
        fallback = std::pair{band[i], band[j]};
      }
    }
  }
  const bool degraded = !chosen;
  if (!chosen) chosen = fallback;
  if (!chosen) return {};
  const auto [a, b] = *chosen;

  // Mirror candidates about the line through both centers decide the third.
  const CircleIntersection hit = intersect_circles(a->waypoint.position, a->projected_ground,
                                                   b->waypoint.position, b->projected_ground);
  GroundPoint p = hit.points[0], q = hit.points[1];
  if (hit.count == 0) {
    p = q = tangency_repair(a->waypoint.position, a->projected_ground, b->waypoint.position,
                            b->projected_ground);
  }
  const std::array<std::int64_t, 2> skip{a->waypoint.id, b->waypoint.id};
  const RangeMeasurement* third = separating_third(all, p, q, skip);
  if (!third) {
    EstimateOutcome out;
    out.status = hit.count == 2 ? EstimateStatus::ambiguous : EstimateStatus::no_valid_triple;
    return out;
  }
  EstimateOutcome out = drbc_from_triple(*a, *b, *third, c.tolerance);
  out.degraded = degraded;
  out.beta_min = crossing_angle(*a, *b);
  return out;
}

std::optional<GroundPoint> range_crossing(const GroundPoint& a, double da, const GroundPoint& b,
                                          double db, double radius) {
  const double len2 = dot(b - a, b - a);
  if (len2 == 0.0) return std::nullopt;
  // da^2 + t (db^2 - da^2 - L^2) + t^2 L^2 = radius^2
  const double qa = len2;
  const double qb = db * db - da * da - len2;
  const double qc = da * da - radius * radius;
  const double t_lin = db != da ? std::clamp((radius - da) / (db - da), 0.0, 1.0) : 0.5;
  double t = t_lin;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    const double q = -0.5 * (qb + (qb >= 0.0 ? s : -s));
    std::array<double, 2> roots{q / qa, q != 0.0 ? qc / q : q / qa};
    double best = std::numeric_limits<double>::infinity();
    for (double r : roots) {
      if (r < -1e-12 || r > 1.0 + 1e-12) continue;
      if (std::abs(r - t_lin) < best) {
        best = std::abs(r - t_lin);
        t = std::clamp(r, 0.0, 1.0);
      }
    }
  }
  return a + t * (b - a);
}

namespace {

struct Crossing {
  GroundPoint point;
  int line = -1;
  bool entering = false;
  std::int64_t before = 0;  // waypoint ids bracketing the crossing
  std::int64_t after = 0;
};

std::map<int, std::vector<const RangeMeasurement*>> by_line(
    const std::vector<const RangeMeasurement*>& all) {
  std::map<int, std::vector<const RangeMeasurement*>> lines;
  for (const auto* m : all) {
    if (m->waypoint.scan_line >= 0) lines[m->waypoint.scan_line].push_back(m);
  }
  return lines;
}

std::vector<Crossing> find_crossings(const std::vector<const RangeMeasurement*>& all, double d) {
  std::vector<Crossing> out;
  for (const auto& [line, ms] : by_line(all)) {
    for (std::size_t i = 0; i + 1 < ms.size(); ++i) {
      const auto* a = ms[i];
      const auto* b = ms[i + 1];
      if (b->waypoint.id != a->waypoint.id + 1) continue;
      const bool a_in = a->projected_ground <= d;
      const bool b_in = b->projected_ground <= d;
      if (a_in == b_in) continue;
      const auto p = range_crossing(a->waypoint.position, a->projected_ground,
                                    b->waypoint.position, b->projected_ground, d);
      if (!p) continue;
      out.push_back({*p, line, b_in, a->waypoint.id, b->waypoint.id});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Crossing& x, const Crossing& y) { return x.after < y.after; });
  return out;
}

}  // namespace

EstimateOutcome estimate_drf(std::span<const RangeMeasurement> measurements,
                             const SelectionConstraints& c) {
  const auto all = by_id(measurements);
  const std::vector<Crossing> crossings = find_crossings(all, c.target_d);

  // The device localizes as soon as it holds two chords: the entry and exit
  // of one scan line plus the next crossing flown on another line.
  EstimateOutcome out;
  bool any_triple = false;
  for (std::size_t i = 0; i < crossings.size(); ++i) {
    const Crossing& a1 = crossings[i];
    if (!a1.entering) continue;
    std::size_t j = i + 1;
    while (j < crossings.size() && crossings[j].line != a1.line) ++j;
    if (j == crossings.size() || crossings[j].entering) continue;
    const Crossing& a2 = crossings[j];
    std::size_t k = j + 1;
    while (k < crossings.size() && crossings[k].line == a1.line) ++k;
    if (k == crossings.size()) continue;
    const Crossing& b = crossings[k];
    any_triple = true;
    const auto center = chord_center(a1.point, a2.point, b.point);
    if (!center) continue;
    out.estimate = *center;
    out.status = EstimateStatus::ok;
    try {
      out.beta_min = beta_angles(*center, a1.point, a2.point, b.point).beta_min();
    } catch (const GeometryError&) {
    }
    out.degraded = out.beta_min < c.min_beta;
    for (const Crossing* x : {&a1, &a2, &b}) {
      out.used_waypoints.push_back(x->before);
      out.used_waypoints.push_back(x->after);
    }
    return out;
  }
  out.status = any_triple ? EstimateStatus::degenerate : EstimateStatus::no_valid_triple;
  return out;
}

namespace {

struct ChordSetup {
  const RangeMeasurement* a0;
  const RangeMeasurement* a1;
  const RangeMeasurement* a2;
  const RangeMeasurement* a3;
};

// Pre-arrival, first and last waypoint within d, and post-departure
// waypoint of the scan line whose chord subtends the angle closest to 90
// degrees.
std::optional<ChordSetup> pick_chord(const std::vector<const RangeMeasurement*>& all, double d) {
  std::optional<ChordSetup> best;
  double best_score = std::numeric_limits<double>::infinity();
  for (const auto& [line, ms] : by_line(all)) {
    std::size_t first = ms.size(), last = ms.size();
    for (std::size_t i = 0; i < ms.size(); ++i) {
      if (ms[i]->projected_ground > d) continue;
      if (first == ms.size()) first = i;
      last = i;
    }
    if (first == ms.size() || first == 0 || last + 1 >= ms.size() || first == last) continue;
    const auto* a0 = ms[first - 1];
    const auto* a1 = ms[first];
    const auto* a2 = ms[last];
    const auto* a3 = ms[last + 1];
    if (a1->waypoint.id != a0->waypoint.id + 1 || a3->waypoint.id != a2->waypoint.id + 1) continue;
    const double chord = distance(a1->waypoint.position, a2->waypoint.position);
    if (chord == 0.0) continue;
    const double angle = 2.0 * std::asin(std::min(1.0, chord / (2.0 * d)));
    const double score = std::abs(angle - kPi / 2.0);
    if (score < best_score) {
      best_score = score;
      best = ChordSetup{a0, a1, a2, a3};
    }
  }
  return best;
}

enum class RegionKind { ioc, ioa };

EstimateOutcome estimate_region(std::span<const RangeMeasurement> measurements,
                                const SelectionConstraints& c, double resolution,
                                RegionKind kind) {
  const auto all = by_id(measurements);
  const double d = c.target_d;
  const auto setup = pick_chord(all, d);
  if (!setup) return {};
  const auto [a0, a1, a2, a3] = *setup;
  const LineFrame frame = LineFrame::through(a1->waypoint.position, a2->waypoint.position);
  const double chord = distance(a1->waypoint.position, a2->waypoint.position);

  EstimateOutcome out;
  out.used_waypoints = {a0->waypoint.id, a1->waypoint.id, a2->waypoint.id, a3->waypoint.id};

  // Side: the mirror apothem points are told apart by an off-line range.
  const double apothem = std::sqrt(std::max(0.0, d * d - 0.25 * chord * chord));
  const GroundPoint up = frame.to_world(0.5 * chord, apothem);
  const GroundPoint down = frame.to_world(0.5 * chord, -apothem);
  std::vector<const RangeMeasurement*> off_line;
  for (const auto* m : all) {
    if (std::abs(frame.v_of(m->waypoint.position)) > 1e-6) off_line.push_back(m);
  }
  const RangeMeasurement* third = separating_third(off_line, up, down, {});
  if (!third) {
    out.status = EstimateStatus::ambiguous;
    return out;
  }
  out.used_waypoints.push_back(third->waypoint.id);
  const double e_up = std::abs(distance(third->waypoint.position, up) - third->projected_ground);
  const double e_down =
      std::abs(distance(third->waypoint.position, down) - third->projected_ground);
  if (std::abs(e_up - e_down) <= 1e-9) {
    out.status = EstimateStatus::ambiguous;
    return out;
  }
  const int side = e_up < e_down ? 1 : -1;

  const double u0 = frame.u_of(a0->waypoint.position);
  const double u3 = frame.u_of(a3->waypoint.position);
  std::vector<LineDisk> disks{{0.0, d, true}, {chord, d, true}};
  const double w1 = distance(a0->waypoint.position, a1->waypoint.position);
  const double w2 = distance(a2->waypoint.position, a3->waypoint.position);
  if (kind == RegionKind::ioc) {
    disks.push_back({u0, d, false});
    disks.push_back({u3, d, false});
  } else {
    disks.push_back({0.0, d - w1, false});
    disks.push_back({chord, d - w2, false});
  }
  const RegionStats region = integrate_line_region(frame, disks, side, resolution);
  out.status = EstimateStatus::ok;
  if (region.area > 0.0) {
    out.estimate = region.centroid;
    out.region_diameter = region.diameter;
    return out;
  }
  out.repaired = true;
  if (kind == RegionKind::ioc) {
    out.estimate = frame.to_world(0.5 * chord, side * apothem);
    return out;
  }
  const double r1 = d - 0.5 * w1, r2 = d - 0.5 * w2;
  const CircleIntersection hit =
      intersect_circles(a1->waypoint.position, r1, a2->waypoint.position, r2);
  if (hit.count == 0) {
    out.estimate = tangency_repair(a1->waypoint.position, r1, a2->waypoint.position, r2);
  } else {
    const bool first_on_side = side * frame.v_of(hit.points[0]) >= 0.0;
    out.estimate = first_on_side ? hit.points[0] : hit.points[1];
  }
  return out;
}

}  // namespace

EstimateOutcome estimate_ioc(std::span<const RangeMeasurement> measurements,
                             const SelectionConstraints& c, double resolution) {
  return estimate_region(measurements, c, resolution, RegionKind::ioc);
}

EstimateOutcome estimate_ioa(std::span<const RangeMeasurement> measurements,
                             const SelectionConstraints& c, double resolution) {
  return estimate_region(measurements, c, resolution, RegionKind::ioa);
}

EstimateOutcome estimate(Algorithm algorithm, std::span<const RangeMeasurement> measurements,
                         const SelectionConstraints& c, double resolution) {
  switch (algorithm) {
    case Algorithm::omni: return estimate_omni(measurements, c);
    case Algorithm::scan: return estimate_scan(measurements, c);
    case Algorithm::drbc: return estimate_drbc(measurements, c);
    case Algorithm::drf: return estimate_drf(measurements, c);
    case Algorithm::ioc: return estimate_ioc(measurements, c, resolution);
    case Algorithm::ioa: return estimate_ioa(measurements, c, resolution);
  }
  throw std::invalid_argument("unknown algorithm");
}

}  // namespace droneloc
