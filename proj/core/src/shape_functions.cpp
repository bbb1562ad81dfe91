#include "acem/shape_functions.hpp"

#include <cmath>

#include <Eigen/LU>

#include "acem/error.hpp"

namespace acem {

namespace {

// Parametric values and derivatives w.r.t. (xi, eta).
struct Parametric {
  std::array<double, kMaxShapeNodes> N{};
  std::array<double, kMaxShapeNodes> dxi{};
  std::array<double, kMaxShapeNodes> deta{};
};

Parametric q8(double xi, double eta) {
  static constexpr double cx[4] = {-1.0, 1.0, 1.0, -1.0};
  static constexpr double cy[4] = {-1.0, -1.0, 1.0, 1.0};
  Parametric p;
  for (int i = 0; i < 4; ++i) {
    const double a = 1.0 + xi * cx[i];
    const double b = 1.0 + eta * cy[i];
    const double s = xi * cx[i] + eta * cy[i] - 1.0;
    p.N[i] = 0.25 * a * b * s;
    p.dxi[i] = 0.25 * cx[i] * b * (s + a);
    p.deta[i] = 0.25 * cy[i] * a * (s + b);
  }
  // Midside nodes at (0,-1), (1,0), (0,1), (-1,0).
  p.N[4] = 0.5 * (1.0 - xi * xi) * (1.0 - eta);
  p.dxi[4] = -xi * (1.0 - eta);
  p.deta[4] = -0.5 * (1.0 - xi * xi);

  p.N[5] = 0.5 * (1.0 + xi) * (1.0 - eta * eta);
  p.dxi[5] = 0.5 * (1.0 - eta * eta);
  p.deta[5] = -eta * (1.0 + xi);

  p.N[6] = 0.5 * (1.0 - xi * xi) * (1.0 + eta);
  p.dxi[6] = -xi * (1.0 + eta);
  p.deta[6] = 0.5 * (1.0 - xi * xi);

  p.N[7] = 0.5 * (1.0 - xi) * (1.0 - eta * eta);
  p.dxi[7] = -0.5 * (1.0 - eta * eta);
  p.deta[7] = -eta * (1.0 - xi);
  return p;
}

Parametric t6(double xi, double eta) {
  const double l0 = 1.0 - xi - eta;
  const double l1 = xi;
  const double l2 = eta;
  // d(l0,l1,l2)/dxi = (-1,1,0), /deta = (-1,0,1)
  Parametric p;
  p.N[0] = l0 * (2.0 * l0 - 1.0);
  p.dxi[0] = -(4.0 * l0 - 1.0);
  p.deta[0] = -(4.0 * l0 - 1.0);

  p.N[1] = l1 * (2.0 * l1 - 1.0);
  p.dxi[1] = 4.0 * l1 - 1.0;
  p.deta[1] = 0.0;

  p.N[2] = l2 * (2.0 * l2 - 1.0);
  p.dxi[2] = 0.0;
  p.deta[2] = 4.0 * l2 - 1.0;

  p.N[3] = 4.0 * l0 * l1;
  p.dxi[3] = 4.0 * (l0 - l1);
  p.deta[3] = -4.0 * l1;

  p.N[4] = 4.0 * l1 * l2;
  p.dxi[4] = 4.0 * l2;
  p.deta[4] = 4.0 * l1;

  p.N[5] = 4.0 * l2 * l0;
  p.dxi[5] = -4.0 * l2;
  p.deta[5] = 4.0 * (l0 - l2);
  return p;
}

}  // namespace

ShapeEval eval_full(int tp, double xi, double eta, std::span<const Vec2> coords) {
  if (tp != 3 && tp != 4) throw GeometryError("eval_full: element type must be 3 or 4");
  const int n = 2 * tp;
  if (static_cast<int>(coords.size()) != n) throw GeometryError("eval_full: wrong number of node coordinates");
  const Parametric p = tp == 4 ? q8(xi, eta) : t6(xi, eta);

  Eigen::Matrix2d J = Eigen::Matrix2d::Zero();  // J(i,j) = d x_j / d xi_i
  for (int i = 0; i < n; ++i) {
    J(0, 0) += p.dxi[i] * coords[i].x();
    J(0, 1) += p.dxi[i] * coords[i].y();
    J(1, 0) += p.deta[i] * coords[i].x();
    J(1, 1) += p.deta[i] * coords[i].y();
  }
  const double det = J.determinant();
  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, (coords[i] - coords[0]).squaredNorm());
  if (!(det > 1e-14 * scale)) throw GeometryError("eval_full: singular or negative Jacobian");

  const Eigen::Matrix2d Jinv = J.inverse();
  ShapeEval out;
  out.tp = tp;
  out.detJ = det;
  for (int i = 0; i < n; ++i) {
    out.N[i] = p.N[i];
    out.dN[0][i] = Jinv(0, 0) * p.dxi[i] + Jinv(0, 1) * p.deta[i];
    out.dN[1][i] = Jinv(1, 0) * p.dxi[i] + Jinv(1, 1) * p.deta[i];
  }
  return out;
}

ShapeEval apply_virtual_node_fold(ShapeEval eval, std::span<const NodeId> econn) {
  const int tp = eval.tp;
  for (int m = 0; m < tp; ++m) {
    if (econn[m] != kNoNode) continue;
    const int i = tp + m;
    const int j = m;
    const int k = (m + 1) % tp;
    eval.N[j] += 0.5 * eval.N[i];
    eval.N[k] += 0.5 * eval.N[i];
    eval.N[i] = 0.0;
    for (int l = 0; l < 2; ++l) {
      eval.dN[l][j] += 0.5 * eval.dN[l][i];
      eval.dN[l][k] += 0.5 * eval.dN[l][i];
      eval.dN[l][i] = 0.0;
    }
  }
  return eval;
}

const QuadratureRule& quadrature(int tp) {
  static const QuadratureRule quad = [] {
    const double g = std::sqrt(0.6);
    const double pts[3] = {-g, 0.0, g};
    const double wts[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    QuadratureRule r;
    for (int j = 0; j < 3; ++j) {
      for (int i = 0; i < 3; ++i) r.points.push_back({pts[i], pts[j], wts[i] * wts[j]});
    }
    return r;
  }();
  static const QuadratureRule tri = [] {
    QuadratureRule r;
    const double w = 1.0 / 6.0;
    r.points = {{1.0 / 6.0, 1.0 / 6.0, w}, {2.0 / 3.0, 1.0 / 6.0, w}, {1.0 / 6.0, 2.0 / 3.0, w}};
    return r;
  }();
  return tp == 4 ? quad : tri;
}

Vec2 parametric_center(int tp) { return tp == 4 ? Vec2(0.0, 0.0) : Vec2(1.0 / 3.0, 1.0 / 3.0); }

BMatrix build_B(const ShapeEval& eval) {
  const int n = eval.num_nodes();
  BMatrix B = BMatrix::Zero(3, 2 * n);
  for (int i = 0; i < n; ++i) {
    B(0, 2 * i) = eval.dN[0][i];
    B(1, 2 * i + 1) = eval.dN[1][i];
    B(2, 2 * i) = eval.dN[1][i];
    B(2, 2 * i + 1) = eval.dN[0][i];
  }
  return B;
}

ShapeEval eval_folded(int tp, double xi, double eta, std::span<const Vec2> coords, std::span<const NodeId> econn) {
  return apply_virtual_node_fold(eval_full(tp, xi, eta, coords), econn);
}

}  // namespace acem
