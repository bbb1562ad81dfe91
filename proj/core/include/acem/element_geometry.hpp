/**
 * @file element_geometry.hpp
 * @brief Crack band geometry of a cracking element: l_c = V / A and B_zeta.
 */
#pragma once

#include <span>

#include <Eigen/Core>

#include "acem/types.hpp"

namespace acem {

/// Shoelace area of a counter-clockwise corner polygon.
/// Throws GeometryError when the area is not positive.
double element_area(std::span<const Vec2> corners);

/// Length of the chord cut from the convex corner polygon by the line
/// anchor + s * t. Throws GeometryError when the line misses the polygon.
double crack_surface_length(std::span<const Vec2> corners, const Vec2& t, const Vec2& anchor);

/// Tangent convention: n rotated by +90 degrees.
inline Vec2 crack_tangent(const Vec2& n) { return {-n.y(), n.x()}; }

struct CrackGeometry {
  Vec2 n{1.0, 0.0};
  Vec2 t{0.0, 1.0};
  double lc = 0.0;  ///< characteristic length V / A
  double A = 0.0;   ///< crack surface length per unit thickness
  double V = 0.0;   ///< element area per unit thickness
};

/// Builds the crack geometry for normal `n`. Quadrilaterals anchor the crack
/// at the center point; triangles at the edge midpoint giving the longest
/// chord (lowest edge index on ties).
CrackGeometry make_crack_geometry(std::span<const Vec2> corners, const Vec2& n);

/// Index of the anchor edge used for a triangle with tangent t.
int triangle_anchor_edge(std::span<const Vec2> corners, const Vec2& t);

/// Enhanced-strain operator, 3 x 2, mapping (zeta_n, zeta_t) to Voigt strain:
/// -(1/l_c) [n_x n_x, n_x t_x; n_y n_y, n_y t_y; 2 n_x n_y, n_x t_y + n_y t_x].
Eigen::Matrix<double, 3, 2> build_Bzeta(const CrackGeometry& geom);

}  // namespace acem
