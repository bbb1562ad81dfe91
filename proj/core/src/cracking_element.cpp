#include "acem/cracking_element.hpp"

#include <cmath>
#include <optional>

namespace acem {

Eigen::Matrix3d plane_stress_C(const Material& mat) {
  const double f = mat.E / (1.0 - mat.nu * mat.nu);
  Eigen::Matrix3d C;
  C << f, f * mat.nu, 0.0,
       f * mat.nu, f, 0.0,
       0.0, 0.0, f * 0.5 * (1.0 - mat.nu);
  return C;
}

ElementInput element_input(const Mesh& mesh, ElementId e) {
  const Element& el = mesh.element(e);
  ElementInput in;
  in.tp = el.tp;
  in.coords = mesh.element_coords(e);
  in.econn.assign(el.econn.begin(), el.econn.begin() + el.tp);
  return in;
}

BMatrix center_B(const ElementInput& el) {
  const Vec2 c = parametric_center(el.tp);
  return build_B(eval_folded(el.tp, c.x(), c.y(), el.coords, el.econn));
}

Voigt strain_hat(const BMatrix& B1, const Eigen::VectorXd& Ue) { return B1 * Ue; }

ElementMatrices assemble_uncracked(const ElementInput& el, const Material& mat, const Eigen::VectorXd& Ue) {
  const int nu = el.num_u_dofs();
  const Eigen::Matrix3d C = plane_stress_C(mat);
  ElementMatrices out;
  out.K = Eigen::MatrixXd::Zero(nu, nu);
  for (const QuadraturePoint& q : quadrature(el.tp).points) {
    const ShapeEval s = eval_folded(el.tp, q.xi, q.eta, el.coords, el.econn);
    const BMatrix B = build_B(s);
    out.K.noalias() += (q.weight * s.detJ) * (B.transpose() * C * B);
  }
  out.R = -out.K * Ue;
  return out;
}

namespace {

struct CrackedBlocks {
  Eigen::MatrixXd K;
  Eigen::MatrixXd S;
};

CrackedBlocks cracked_blocks(const ElementInput& el, const Material& mat, const CrackGeometry& geom) {
  const int nu = el.num_u_dofs();
  const int nt = nu + 2;
  const Eigen::Matrix3d C = plane_stress_C(mat);
  const BMatrix B1 = center_B(el);
  const Eigen::Matrix<double, 3, 2> Bz = build_Bzeta(geom);

  CrackedBlocks out;
  out.K = Eigen::MatrixXd::Zero(nt, nt);
  out.S = Eigen::MatrixXd::Zero(nt, nt);
  for (const QuadraturePoint& q : quadrature(el.tp).points) {
    const ShapeEval s = eval_folded(el.tp, q.xi, q.eta, el.coords, el.econn);
    const BMatrix B = build_B(s);
    const double w = q.weight * s.detJ;
    const Eigen::MatrixXd BtC = B.transpose() * C;
    out.K.topLeftCorner(nu, nu).noalias() += w * (BtC * B);
    out.K.topRightCorner(nu, 2).noalias() += w * (BtC * Bz);
    out.K.bottomLeftCorner(2, nu).noalias() += w * (Bz.transpose() * C * B);
    out.K.bottomRightCorner(2, 2).noalias() += w * (Bz.transpose() * C * Bz);
    out.S.topLeftCorner(nu, nu).noalias() += w * (BtC * B1);
  }
  out.S.topRightCorner(nu, 2) = out.K.topRightCorner(nu, 2);
  out.S.bottomLeftCorner(2, nu) = geom.V * (Bz.transpose() * C * B1);
  out.S.bottomRightCorner(2, 2) = geom.V * (Bz.transpose() * C * Bz);
  return out;
}

}  // namespace

Eigen::MatrixXd cracked_S(const ElementInput& el, const Material& mat, const CrackGeometry& geom) {
  return cracked_blocks(el, mat, geom).S;
}

namespace {

Eigen::VectorXd cracked_residual(const Eigen::MatrixXd& S, const CrackGeometry& geom, const Traction& T,
                                 const Eigen::VectorXd& Ue, const Eigen::Vector2d& zeta) {
  const auto nu = Ue.size();
  Eigen::VectorXd state(nu + 2);
  state.head(nu) = Ue;
  state.tail(2) = zeta;
  Eigen::VectorXd R = -S * state;
  R(nu) -= geom.A * T.Tn;
  R(nu + 1) -= geom.A * T.Tt;
  return R;
}

// d(theta)/d(eps_hat) for the principal angle theta = atan2(gxy, ex - ey) / 2.
std::optional<Eigen::RowVector3d> principal_angle_gradient(const Voigt& eps) {
  const double a = eps(0) - eps(1);
  const double g = eps(2);
  const double r2 = a * a + g * g;
  if (r2 <= 1e-24 * (eps.squaredNorm() + 1e-300)) return std::nullopt;
  return Eigen::RowVector3d(-0.5 * g / r2, 0.5 * g / r2, 0.5 * a / r2);
}

Vec2 rotate(const Vec2& v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

}  // namespace

ElementMatrices assemble_cracked(const ElementInput& el, const Material& mat, const CrackState& crack,
                                 const Eigen::VectorXd& Ue, const Eigen::Vector2d& zeta, IterationMatrix matrix,
                                 double stabilization) {
  const int nu = el.num_u_dofs();
  CrackedBlocks blocks = cracked_blocks(el, mat, crack.geom);
  const Eigen::Matrix2d D = tangent(zeta.x(), zeta.y(), crack.hist, mat);
  const Traction T = traction(zeta.x(), zeta.y(), crack.hist, mat);

  ElementMatrices out;
  out.R = cracked_residual(blocks.S, crack.geom, T, Ue, zeta);
  if (matrix == IterationMatrix::paper) {
    out.K = std::move(blocks.K);
    out.K.bottomRightCorner(2, 2) += crack.geom.A * D;
    return out;
  }

  out.K = blocks.S;
  out.K.topLeftCorner(nu, nu) += stabilization * blocks.K.topLeftCorner(nu, nu);
  out.K.bottomRightCorner(2, 2) += crack.geom.A * D;
  if (crack.frozen || matrix == IterationMatrix::fixed_normal) return out;

  // A free normal follows the center strain: add -dR/dtheta (x) dtheta/dU.
  const BMatrix B1 = center_B(el);
  const auto grad = principal_angle_gradient(B1 * Ue);
  if (!grad) return out;
  const double h = 1e-7;
  const std::vector<Vec2> corners = el.corners();
  auto residual_at = [&](double angle) {
    const CrackGeometry g = make_crack_geometry(corners, rotate(crack.geom.n, angle));
    return cracked_residual(cracked_blocks(el, mat, g).S, g, T, Ue, zeta);
  };
  const Eigen::VectorXd dR = (residual_at(h) - residual_at(-h)) / (2.0 * h);
  out.K.leftCols(nu).noalias() -= dR * (*grad * B1);
  return out;
}

Eigen::Vector2d local_crack_residual(const ElementInput& el, const Material& mat, const CrackState& crack,
                                     const Eigen::VectorXd& Ue, const Eigen::Vector2d& zeta) {
  const Eigen::Matrix3d C = plane_stress_C(mat);
  const Eigen::Matrix<double, 3, 2> Bz = build_Bzeta(crack.geom);
  const Voigt eps = center_B(el) * Ue + Bz * zeta;
  const Traction T = traction(zeta.x(), zeta.y(), crack.hist, mat);
  return crack.geom.lc * (Bz.transpose() * C * eps) + Eigen::Vector2d(T.Tn, T.Tt);
}

std::vector<int> element_scatter(const Mesh& mesh, ElementId e) {
  const Element& el = mesh.element(e);
  std::vector<int> scatter;
  scatter.reserve(4 * el.tp + 2);
  for (NodeId n : mesh.element_slots(e)) {
    scatter.push_back(n == kNoNode ? -1 : 2 * n);
    scatter.push_back(n == kNoNode ? -1 : 2 * n + 1);
  }
  if (el.has_center()) {
    scatter.push_back(2 * el.center);
    scatter.push_back(2 * el.center + 1);
  }
  return scatter;
}

Eigen::VectorXd gather_displacements(const Mesh& mesh, ElementId e, const Eigen::VectorXd& U) {
  const std::vector<NodeId> slots = mesh.element_slots(e);
  Eigen::VectorXd Ue = Eigen::VectorXd::Zero(2 * static_cast<Eigen::Index>(slots.size()));
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i] == kNoNode) continue;
    Ue(2 * i) = U(2 * slots[i]);
    Ue(2 * i + 1) = U(2 * slots[i] + 1);
  }
  return Ue;
}

}  // namespace acem
