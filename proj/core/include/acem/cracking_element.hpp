/**
 * @file cracking_element.hpp
 * @brief Element kernels for hybrid (folded) and cracking elements.
 *
 * Local DOF layout: [u_x, u_y] per shape-function slot (corners, then edge
 * slots), followed by (zeta_n, zeta_t) for cracking elements. Virtual slots
 * carry exactly-zero rows and columns.
 *
 * A cracking element uses the center-point state for its stress:
 *   sigma = C [B1, Bz] [U; zeta]
 * and produces
 *   K = int [B, Bz]^T C [B, Bz] + blockdiag(0, A D)
 *   R = [F; -A T] - S [U; zeta]
 *   S = [ int B^T C B1      int B^T C Bz ]
 *       [ V Bz^T C B1       V Bz^T C Bz  ]
 * S defines the residual. The iteration matrix is either the K above or the
 * linearisation at fixed n, S + blockdiag(0, A D), whose displacement block
 * only sees the center strain; `stabilization` adds that multiple of the
 * full-integration block so the zero-energy modes stay invertible.
 */
#pragma once

#include <vector>

#include <Eigen/Core>

#include "acem/cohesive_law.hpp"
#include "acem/element_geometry.hpp"
#include "acem/mesh.hpp"
#include "acem/shape_functions.hpp"
#include "acem/types.hpp"

namespace acem {

/// Plane-stress elasticity matrix E/(1-nu^2) [[1,nu,0],[nu,1,0],[0,0,(1-nu)/2]].
Eigen::Matrix3d plane_stress_C(const Material& mat);

/// Geometry snapshot of one element: shape-function node positions (virtual
/// nodes at edge midpoints) and the econn occupancy.
struct ElementInput {
  int tp = 4;
  std::vector<Vec2> coords;   ///< 2*tp
  std::vector<NodeId> econn;  ///< tp, kNoNode marks a virtual node
  std::vector<Vec2> corners() const { return {coords.begin(), coords.begin() + tp}; }
  int num_u_dofs() const { return 4 * tp; }
};

ElementInput element_input(const Mesh& mesh, ElementId e);

/// Crack data carried by a cracking element.
struct CrackState {
  CrackGeometry geom;
  CrackHistory hist;
  bool frozen = false;  ///< normal no longer follows the strain field
};

struct ElementMatrices {
  Eigen::MatrixXd K;  ///< iteration matrix
  Eigen::VectorXd R;
  std::vector<int> scatter;  ///< global DOF per local row, -1 for virtual slots
};

/// Folded B at the element center (xi = eta = 0, or the barycenter).
BMatrix center_B(const ElementInput& el);

/// Center-representation total strain B1 * U_e.
Voigt strain_hat(const BMatrix& B1, const Eigen::VectorXd& Ue);

ElementMatrices assemble_uncracked(const ElementInput& el, const Material& mat, const Eigen::VectorXd& Ue);

enum class IterationMatrix {
  consistent,    ///< S + blockdiag(0, A D) (+ stabilization) + rotation of free normals
  paper,         ///< K with the full-integration displacement block
  fixed_normal,  ///< consistent without the rotation term
};

ElementMatrices assemble_cracked(const ElementInput& el, const Material& mat, const CrackState& crack,
                                 const Eigen::VectorXd& Ue, const Eigen::Vector2d& zeta,
                                 IterationMatrix matrix = IterationMatrix::consistent, double stabilization = 0.0);

/// The residual operator S of a cracking element ((2n+2) square).
Eigen::MatrixXd cracked_S(const ElementInput& el, const Material& mat, const CrackGeometry& geom);

/// l_c Bz^T C [B1, Bz] [U; zeta] + T; zero at a converged crack state.
Eigen::Vector2d local_crack_residual(const ElementInput& el, const Material& mat, const CrackState& crack,
                                     const Eigen::VectorXd& Ue, const Eigen::Vector2d& zeta);

/// Global DOF ids for the element's local rows (2 per node; center node last
/// when the element is cracked). Virtual slots map to -1.
std::vector<int> element_scatter(const Mesh& mesh, ElementId e);

/// Element nodal displacements gathered from the global vector (virtual slots zero).
Eigen::VectorXd gather_displacements(const Mesh& mesh, ElementId e, const Eigen::VectorXd& U);

}  // namespace acem
