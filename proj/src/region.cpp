#include "droneloc/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace droneloc {

CircleIntersection intersect_circles(GroundPoint c1, double r1, GroundPoint c2, double r2,
                                     double tangency_tol) {
  CircleIntersection out;
  const double dist = distance(c1, c2);
  if (dist == 0.0) return out;
  const GroundPoint u = (1.0 / dist) * (c2 - c1);
  const double scale = std::max(r1 + r2, 1.0);
  const bool external_touch = std::abs(dist - (r1 + r2)) <= tangency_tol * scale;
  const bool internal_touch = std::abs(dist - std::abs(r1 - r2)) <= tangency_tol * scale;

  const double a = (r1 * r1 - r2 * r2 + dist * dist) / (2.0 * dist);
  const double h2 = r1 * r1 - a * a;
  if (external_touch || internal_touch) {
    out.count = 1;
    out.points[0] = c1 + a * u;
    out.points[1] = out.points[0];
    return out;
  }
  if (h2 < 0.0) return out;
  const double h = std::sqrt(h2);
  const GroundPoint base = c1 + a * u;
  const GroundPoint n{-u.y, u.x};
  out.count = 2;
  out.points[0] = base + h * n;
  out.points[1] = base - h * n;
  return out;
}

GroundPoint tangency_repair(GroundPoint c1, double r1, GroundPoint c2, double r2,
                            double* gap_half) {
  const double dist = distance(c1, c2);
  GroundPoint u = dist > 0.0 ? (1.0 / dist) * (c2 - c1) : GroundPoint{1.0, 0.0};
  double gap = 0.0;
  GroundPoint point;
  if (dist >= r1 + r2) {
    gap = dist - r1 - r2;
    point = c1 + (r1 + 0.5 * gap) * u;
  } else if (dist <= std::abs(r1 - r2)) {
    gap = std::abs(r1 - r2) - dist;
    if (r1 >= r2) {
      point = c1 + (r1 - 0.5 * gap) * u;
    } else {
      point = c2 + (r2 - 0.5 * gap) * (-1.0 * u);
    }
  } else {
    point = intersect_circles(c1, r1, c2, r2, 0.0).points[0];
  }
  if (gap_half) *gap_half = 0.5 * gap;
  return point;
}

std::optional<GroundPoint> chord_center(const GroundPoint& a, const GroundPoint& b,
                                        const GroundPoint& c) {
  const GroundPoint ab = b - a;
  const GroundPoint bc = c - b;
  const double lab = norm(ab);
  const double lbc = norm(bc);
  if (lab < 1e-6 || lbc < 1e-6) return std::nullopt;
  const double det = cross(ab, bc);
  if (std::abs(det) <= 1e-12 * lab * lbc) return std::nullopt;
  const GroundPoint m1 = 0.5 * (a + b);
  const GroundPoint m2 = 0.5 * (b + c);
  const double k1 = dot(ab, m1);
  const double k2 = dot(bc, m2);
  return GroundPoint{(k1 * bc.y - k2 * ab.y) / det, (ab.x * k2 - bc.x * k1) / det};
}

LineFrame LineFrame::through(const GroundPoint& a, const GroundPoint& b) {
  const double len = distance(a, b);
  if (len == 0.0) throw GeometryError("line through coincident points");
  LineFrame f;
  f.origin = a;
  f.along = (1.0 / len) * (b - a);
  f.normal = {-f.along.y, f.along.x};
  return f;
}

namespace {

using Interval = std::pair<double, double>;

void intersect_with(std::vector<Interval>& set, double lo, double hi) {
  std::vector<Interval> out;
  for (const auto& [a, b] : set) {
    const double l = std::max(a, lo);
    const double h = std::min(b, hi);
    if (l < h) out.emplace_back(l, h);
  }
  set.swap(out);
}

void subtract(std::vector<Interval>& set, double lo, double hi) {
  std::vector<Interval> out;
  for (const auto& [a, b] : set) {
    if (hi <= a || lo >= b) {
      out.emplace_back(a, b);
      continue;
    }
    if (a < lo) out.emplace_back(a, lo);
    if (hi < b) out.emplace_back(hi, b);
  }
  set.swap(out);
}

}  // namespace

RegionStats integrate_line_region(const LineFrame& frame, std::span<const LineDisk> disks,
                                  int side, double resolution) {
  RegionStats stats;
  if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be positive");
  double v_max = std::numeric_limits<double>::infinity();
  for (const LineDisk& disk : disks) {
    if (disk.inside) v_max = std::min(v_max, disk.radius);
  }
  if (!std::isfinite(v_max)) throw std::invalid_argument("region must include a bounding disk");
  const double sign = side >= 0 ? 1.0 : -1.0;

  double area = 0.0, mu = 0.0, mv = 0.0;
  std::vector<GroundPoint> boundary;  // in (u, v) coordinates
  const auto columns = static_cast<long>(std::ceil(v_max / resolution));
  std::vector<Interval> set;
  for (long k = 0; k < columns; ++k) {
    const double v = (static_cast<double>(k) + 0.5) * resolution;
    set.assign(1, {-std::numeric_limits<double>::infinity(),
                   std::numeric_limits<double>::infinity()});
    for (const LineDisk& disk : disks) {
      const double r2 = disk.radius * disk.radius - v * v;
      if (disk.inside) {
        if (r2 <= 0.0) {
          set.clear();
          break;
        }
        const double half = std::sqrt(r2);
        intersect_with(set, disk.u - half, disk.u + half);
      } else if (r2 > 0.0) {
        const double half = std::sqrt(r2);
        subtract(set, disk.u - half, disk.u + half);
      }
      if (set.empty()) break;
    }
    for (const auto& [a, b] : set) {
      const double len = b - a;
      area += len * resolution;
      mu += 0.5 * (b * b - a * a) * resolution;
      mv += len * v * resolution;
      boundary.push_back({a, v});
      boundary.push_back({b, v});
    }
  }
  stats.area = area;
  if (area <= 0.0) return stats;
  stats.centroid = frame.to_world(mu / area, sign * mv / area);
  double diam2 = 0.0;
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    for (std::size_t j = i + 1; j < boundary.size(); ++j) {
      const GroundPoint d = boundary[i] - boundary[j];
      diam2 = std::max(diam2, dot(d, d));
    }
  }
  stats.diameter = std::sqrt(diam2);
  return stats;
}

}  // namespace droneloc
