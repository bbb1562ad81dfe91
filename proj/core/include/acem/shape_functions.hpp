/**
 * @file shape_functions.hpp
 * @brief Q8 serendipity / T6 shape functions and the virtual-node fold.
 *
 * Local node order: corners 0..tp-1 counter-clockwise, then edge slots
 * tp..2tp-1 where slot tp+i sits on the edge between corners i and (i+1)%tp.
 * Quadrilateral reference square [-1,1]^2 with corners (-1,-1),(1,-1),(1,1),(-1,1);
 * triangle reference corners (0,0),(1,0),(0,1).
 */
#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "acem/types.hpp"

namespace acem {

inline constexpr int kMaxShapeNodes = 8;

struct ShapeEval {
  int tp = 4;
  std::array<double, kMaxShapeNodes> N{};
  /// dN[0][i] = dN_i/dx, dN[1][i] = dN_i/dy
  std::array<std::array<double, kMaxShapeNodes>, 2> dN{};
  double detJ = 0.0;

  int num_nodes() const { return 2 * tp; }
};

struct QuadraturePoint {
  double xi;
  double eta;
  double weight;
};

struct QuadratureRule {
  std::vector<QuadraturePoint> points;
};

/// Q8 (tp = 4) or T6 (tp = 3) values and Cartesian derivatives at (xi, eta).
/// `coords` holds the 2*tp node positions. Throws GeometryError when detJ <= 0.
ShapeEval eval_full(int tp, double xi, double eta, std::span<const Vec2> coords);

/// Folds every absent edge node onto its two corners (half each) and zeroes
/// it, for N and both derivative rows. `econn[i] == kNoNode` marks absence.
ShapeEval apply_virtual_node_fold(ShapeEval eval, std::span<const NodeId> econn);

/// 3x3 Gauss-Legendre for quads, 3-point degree-2 rule for triangles.
const QuadratureRule& quadrature(int tp);

/// Parametric coordinates of the element center (origin or barycenter).
Vec2 parametric_center(int tp);

using BMatrix = Eigen::Matrix<double, 3, Eigen::Dynamic, Eigen::ColMajor, 3, 2 * kMaxShapeNodes>;

/// Strain-displacement matrix, 3 x 2n, per-node blocks
/// [dN/dx 0; 0 dN/dy; dN/dy dN/dx].
BMatrix build_B(const ShapeEval& eval);

/// Folded evaluation for a mesh element at a parametric point.
ShapeEval eval_folded(int tp, double xi, double eta, std::span<const Vec2> coords, std::span<const NodeId> econn);

}  // namespace acem
