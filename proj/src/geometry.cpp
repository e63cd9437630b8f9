#include "droneloc/geometry.hpp"

#include <algorithm>

namespace droneloc {

double ground_distance(const Waypoint& w, const GroundPoint& p) {
  return distance(w.position, p);
}

double slant_distance(const Waypoint& w, const GroundPoint& p) {
  return std::hypot(ground_distance(w, p), w.altitude);
}

double elevation_angle(double h, double d) {
  if (h == 0.0 && d == 0.0) {
    throw GeometryError("elevation angle undefined for h = d = 0");
  }
  return std::atan2(h, d);
}

GroundProjection project_slant_to_ground(double s_measured, double h) {
  if (s_measured > h) {
    // (s - h)(s + h) keeps precision when s is close to h
    return {std::sqrt((s_measured - h) * (s_measured + h)), false};
  }
  return {0.0, s_measured < h};
}

double line_orientation(const GroundPoint& from, const GroundPoint& to) {
  double theta = std::atan2(to.y - from.y, to.x - from.x);
  if (theta < 0.0) theta += kPi;
  if (theta >= kPi) theta -= kPi;
  return theta;
}

TriangleGeometry beta_angles(const GroundPoint& p, const GroundPoint& w1, const GroundPoint& w2,
                             const GroundPoint& w3) {
  for (const GroundPoint* w : {&w1, &w2, &w3}) {
    if (distance(p, *w) == 0.0) {
      throw GeometryError("target coincides with an anchor");
    }
  }
  std::array<double, 3> theta{line_orientation(p, w1), line_orientation(p, w2),
                              line_orientation(p, w3)};
  std::sort(theta.begin(), theta.end());
  TriangleGeometry g;
  g.beta = {theta[1] - theta[0], theta[2] - theta[1], kPi - (theta[2] - theta[0])};
  std::sort(g.beta.begin(), g.beta.end());
  return g;
}

namespace {

double vertex_angle(const GroundPoint& at, const GroundPoint& u, const GroundPoint& v) {
  const GroundPoint a = u - at;
  const GroundPoint b = v - at;
  return std::atan2(std::abs(cross(a, b)), dot(a, b));
}

}  // namespace

double min_interior_angle(const GroundPoint& a, const GroundPoint& b, const GroundPoint& c) {
  if (a == b || b == c || a == c) return 0.0;
  return std::min({vertex_angle(a, b, c), vertex_angle(b, c, a), vertex_angle(c, a, b)});
}

}  // namespace droneloc
