#include "acem/element_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "acem/error.hpp"

namespace acem {

double element_area(std::span<const Vec2> corners) {
  const std::size_t n = corners.size();
  if (n < 3) throw GeometryError("element_area: fewer than three corners");
  double twice = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = corners[i];
    const Vec2& b = corners[(i + 1) % n];
    twice += a.x() * b.y() - b.x() * a.y();
    scale = std::max(scale, (b - a).squaredNorm());
  }
  const double area = 0.5 * twice;
  if (!(area > 1e-14 * scale)) throw GeometryError("element_area: degenerate or inverted polygon");
  return area;
}

double crack_surface_length(std::span<const Vec2> corners, const Vec2& t, const Vec2& anchor) {
  const std::size_t n = corners.size();
  const Vec2 dir = t.normalized();
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, (corners[(i + 1) % n] - corners[i]).norm());

  double s_min = -std::numeric_limits<double>::infinity();
  double s_max = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = corners[i];
    const Vec2 edge = corners[(i + 1) % n] - p;
    const Vec2 inward(-edge.y(), edge.x());
    const double offset = inward.dot(anchor - p);
    const double slope = inward.dot(dir);
    if (std::abs(slope) <= 1e-12 * inward.norm()) {
      if (offset < -1e-12 * inward.norm() * scale) {
        throw GeometryError("crack_surface_length: crack line misses the element");
      }
      continue;
    }
    const double s = -offset / slope;
    if (slope > 0.0) {
      s_min = std::max(s_min, s);
    } else {
      s_max = std::min(s_max, s);
    }
  }
  const double len = s_max - s_min;
  if (!(len > 1e-12 * scale)) throw GeometryError("crack_surface_length: crack line misses the element");
  return len;
}

int triangle_anchor_edge(std::span<const Vec2> corners, const Vec2& t) {
  int best = 0;
  double best_len = -1.0;
  for (int k = 0; k < 3; ++k) {
    const Vec2 mid = 0.5 * (corners[k] + corners[(k + 1) % 3]);
    double len = 0.0;
    try {
      len = crack_surface_length(corners, t, mid);
    } catch (const GeometryError&) {
      len = 0.0;
    }
    if (len > best_len * (1.0 + 1e-12)) {
      best_len = len;
      best = k;
    }
  }
  return best;
}

CrackGeometry make_crack_geometry(std::span<const Vec2> corners, const Vec2& n) {
  CrackGeometry g;
  g.n = n.normalized();
  g.t = crack_tangent(g.n);
  g.V = element_area(corners);
  Vec2 anchor = Vec2::Zero();
  if (corners.size() == 4) {
    for (const Vec2& c : corners) anchor += 0.25 * c;
  } else {
    const int k = triangle_anchor_edge(corners, g.t);
    anchor = 0.5 * (corners[k] + corners[(k + 1) % 3]);
  }
  g.A = crack_surface_length(corners, g.t, anchor);
  g.lc = g.V / g.A;
  return g;
}

Eigen::Matrix<double, 3, 2> build_Bzeta(const CrackGeometry& geom) {
  const Vec2& n = geom.n;
  const Vec2& t = geom.t;
  Eigen::Matrix<double, 3, 2> b;
  b << n.x() * n.x(), n.x() * t.x(),
       n.y() * n.y(), n.y() * t.y(),
       2.0 * n.x() * n.y(), n.x() * t.y() + n.y() * t.x();
  return (-1.0 / geom.lc) * b;
}

}  // namespace acem
