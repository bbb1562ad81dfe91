#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "acem/cracking_element.hpp"
#include "acem/propagation.hpp"
#include "test_support.hpp"

using namespace acem;
using acem::testing::concrete;

namespace {

ElementInput square_input(double h, unsigned mask) {
  ElementInput in;
  in.tp = 4;
  const std::vector<Vec2> c{{0, 0}, {h, 0}, {h, h}, {0, h}};
  in.coords = c;
  for (int i = 0; i < 4; ++i) in.coords.push_back(0.5 * (c[i] + c[(i + 1) % 4]));
  in.econn.assign(4, kNoNode);
  for (int i = 0; i < 4; ++i) {
    if (mask & (1u << i)) in.econn[i] = 10 + i;
  }
  return in;
}

ElementInput distorted_input(unsigned mask) {
  ElementInput in;
  in.tp = 4;
  const std::vector<Vec2> c{{0, 0}, {0.11, 0.01}, {0.1, 0.09}, {-0.01, 0.1}};
  in.coords = c;
  for (int i = 0; i < 4; ++i) in.coords.push_back(0.5 * (c[i] + c[(i + 1) % 4]));
  in.econn.assign(4, kNoNode);
  for (int i = 0; i < 4; ++i) {
    if (mask & (1u << i)) in.econn[i] = 10 + i;
  }
  return in;
}

Eigen::VectorXd zero_virtual(const ElementInput& in, Eigen::VectorXd U) {
  for (int i = 0; i < in.tp; ++i) {
    if (in.econn[i] == kNoNode) U.segment<2>(2 * (in.tp + i)).setZero();
  }
  return U;
}

/// Residual of a cracking element whose normal tracks the center strain.
Eigen::VectorXd free_normal_residual(const ElementInput& in, const Material& mat, const CrackHistory& hist,
                                     const Eigen::VectorXd& state) {
  const int nu = in.num_u_dofs();
  const Eigen::VectorXd Ue = state.head(nu);
  CrackState cs;
  cs.hist = hist;
  cs.geom = make_crack_geometry(in.corners(), crack_normal(center_B(in) * Ue).n);
  return assemble_cracked(in, mat, cs, Ue, state.tail(2), IterationMatrix::paper).R;
}

}  // namespace

TEST(CrackingElement, PlaneStressMatrix) {
  const Eigen::Matrix3d C = plane_stress_C({1.0, 0.25, 1.0, 1.0});
  const double f = 1.0 / (1.0 - 0.0625);
  Eigen::Matrix3d ref;
  ref << f, 0.25 * f, 0, 0.25 * f, f, 0, 0, 0, 0.375 * f;
  EXPECT_LT((C - ref).norm(), 1e-15);
}

TEST(CrackingElement, ZeroStateHasZeroResidual) {
  const ElementInput in = square_input(0.1, 0);
  CrackState cs;
  cs.geom = make_crack_geometry(in.corners(), Vec2(1, 0));
  const ElementMatrices m = assemble_cracked(in, concrete(), cs, Eigen::VectorXd::Zero(16), Eigen::Vector2d::Zero());
  EXPECT_EQ(m.R.size(), 18);
  EXPECT_EQ(m.R.norm(), 0.0);
}

TEST(CrackingElement, PaperMatrixIsSymmetricAndRigidFree) {
  const Material mat = concrete();
  for (unsigned mask : {0u, 3u, 15u}) {
    const ElementInput in = distorted_input(mask);
    CrackState cs;
    cs.geom = make_crack_geometry(in.corners(), Vec2(0.8, 0.6));
    const Eigen::Vector2d zeta(0.3 * mat.zeta0(), 0.1 * mat.zeta0());
    const ElementMatrices m =
        assemble_cracked(in, mat, cs, Eigen::VectorXd::Zero(16), zeta, IterationMatrix::paper);
    EXPECT_LT((m.K - m.K.transpose()).norm(), 1e-12 * m.K.norm());

    Eigen::VectorXd rot = Eigen::VectorXd::Zero(18), tx = rot;
    for (int a = 0; a < 8; ++a) {
      tx(2 * a) = 1;
      rot(2 * a) = -in.coords[a].y();
      rot(2 * a + 1) = in.coords[a].x();
    }
    rot = zero_virtual(in, rot);
    tx = zero_virtual(in, tx);
    const Eigen::MatrixXd S = cracked_S(in, mat, cs.geom);
    // Folded rigid modes: corners move rigidly, virtual slots stay zero.
    EXPECT_LT((m.K * tx).norm(), 1e-9 * m.K.norm());
    EXPECT_LT((m.K * rot).norm(), 1e-9 * m.K.norm());
    EXPECT_LT((S * tx).norm(), 1e-9 * S.norm());
    EXPECT_LT((S * rot).norm(), 1e-9 * S.norm());
  }
}

TEST(CrackingElement, VirtualSlotsStayZeroWhenCracked) {
  const Material mat = concrete();
  const ElementInput in = distorted_input(5u);
  CrackState cs;
  cs.geom = make_crack_geometry(in.corners(), Vec2(1, 0));
  Eigen::VectorXd Ue = Eigen::VectorXd::LinSpaced(16, 1e-6, 3e-6);
  Ue = zero_virtual(in, Ue);
  for (IterationMatrix im : {IterationMatrix::paper, IterationMatrix::consistent}) {
    const ElementMatrices m = assemble_cracked(in, mat, cs, Ue, Eigen::Vector2d(2e-6, 0), im, 1e-6);
    for (int i : {1, 3}) {
      for (int d = 0; d < 2; ++d) {
        const int r = 2 * (4 + i) + d;
        EXPECT_EQ(m.K.row(r).cwiseAbs().maxCoeff(), 0.0);
        EXPECT_EQ(m.K.col(r).cwiseAbs().maxCoeff(), 0.0);
        EXPECT_EQ(m.R(r), 0.0);
      }
    }
  }
}

TEST(CrackingElement, LocalResidualIsScaledCrackRow) {
  const Material mat = concrete();
  const ElementInput in = distorted_input(9u);
  CrackState cs;
  cs.geom = make_crack_geometry(in.corners(), Vec2(0.6, 0.8));
  cs.hist = update_history({}, 4 * mat.zeta0(), mat);
  const Eigen::VectorXd Ue = zero_virtual(in, Eigen::VectorXd::LinSpaced(16, -2e-6, 5e-6));
  const Eigen::Vector2d zeta(2 * mat.zeta0(), -0.5 * mat.zeta0());
  const Eigen::VectorXd R = assemble_cracked(in, mat, cs, Ue, zeta, IterationMatrix::paper).R;
  const Eigen::Vector2d local = local_crack_residual(in, mat, cs, Ue, zeta);
  EXPECT_LT((local + R.tail(2) / cs.geom.A).norm(), 1e-9 * (local.norm() + mat.ft));
}

TEST(CrackingElement, UniaxialLocalBalanceExample) {
  // Unit square, E = 1, nu = 0, crack normal x: balance reads T(z) = e - z.
  const Material mat{1.0, 0.0, 0.1, 0.05};
  const ElementInput in = square_input(1.0, 0);
  CrackState cs;
  cs.geom = make_crack_geometry(in.corners(), Vec2(1, 0));
  const double e = 0.3;
  Eigen::VectorXd Ue = Eigen::VectorXd::Zero(16);
  for (int a = 0; a < 4; ++a) Ue(2 * a) = e * in.coords[a].x();
  const double z = 0.2;
  const Eigen::Vector2d r = local_crack_residual(in, mat, cs, Ue, Eigen::Vector2d(z, 0));
  EXPECT_NEAR(r(0), -(e - z) + acem::testing::reference_traction(z, mat), 1e-14);
  EXPECT_NEAR(r(1), 0.0, 1e-14);
}

TEST(CrackingElement, FrozenConsistentMatrixIsExactJacobian) {
  const Material mat = concrete();
  const ElementInput in = distorted_input(6u);
  CrackState cs;
  cs.frozen = true;
  cs.geom = make_crack_geometry(in.corners(), Vec2(0.6, 0.8));
  cs.hist = update_history({}, 10 * mat.zeta0(), mat);
  const Eigen::VectorXd Ue = zero_virtual(in, 1e-5 * Eigen::VectorXd::LinSpaced(16, -1, 2));
  for (const Eigen::Vector2d& zeta : {Eigen::Vector2d(3 * mat.zeta0(), mat.zeta0()),
                                      Eigen::Vector2d(30 * mat.zeta0(), -4 * mat.zeta0())}) {
    const Eigen::MatrixXd K = assemble_cracked(in, mat, cs, Ue, zeta, IterationMatrix::consistent, 0.0).K;
    Eigen::VectorXd state(18);
    state << Ue, zeta;
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(18, 18);
    for (int c = 0; c < 18; ++c) {
      if (c >= 8 && c < 16 && in.econn[(c - 8) / 2] == kNoNode) continue;
      const double h = c < 16 ? 1e-9 : 1e-3 * mat.zeta0();
      Eigen::VectorXd p = state, q = state;
      p(c) += h;
      q(c) -= h;
      F.col(c) = -(assemble_cracked(in, mat, cs, p.head(16), p.tail(2), IterationMatrix::paper).R -
                   assemble_cracked(in, mat, cs, q.head(16), q.tail(2), IterationMatrix::paper).R) /
                 (2 * h);
    }
    EXPECT_LT((K - F).norm(), 1e-6 * K.norm());
  }
}

TEST(CrackingElement, FreeNormalConsistentMatrixMatchesFiniteDifferences) {
  const Material mat = concrete();
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (unsigned mask : {0u, 10u, 15u}) {
    const ElementInput in = distorted_input(mask);
    Eigen::VectorXd Ue(16);
    for (int a = 0; a < 8; ++a) {
      const Vec2& p = in.coords[a];
      Ue(2 * a) = 1e-4 * (1.0 * p.x() + 0.3 * p.y()) + 1e-7 * u(rng);
      Ue(2 * a + 1) = 1e-4 * (0.2 * p.x() + 0.4 * p.y()) + 1e-7 * u(rng);
    }
    Ue = zero_virtual(in, Ue);
    CrackState cs;
    cs.hist = update_history({}, 5 * mat.zeta0(), mat);
    cs.geom = make_crack_geometry(in.corners(), crack_normal(center_B(in) * Ue).n);
    const Eigen::Vector2d zeta(8 * mat.zeta0(), 0.7 * mat.zeta0());
    const Eigen::MatrixXd K = assemble_cracked(in, mat, cs, Ue, zeta, IterationMatrix::consistent, 0.0).K;

    Eigen::VectorXd state(18);
    state << Ue, zeta;
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(18, 18);
    for (int c = 0; c < 18; ++c) {
      if (c >= 8 && c < 16 && in.econn[(c - 8) / 2] == kNoNode) continue;
      const double h = c < 16 ? 1e-10 : 1e-3 * mat.zeta0();
      Eigen::VectorXd p = state, q = state;
      p(c) += h;
      q(c) -= h;
      F.col(c) = -(free_normal_residual(in, mat, cs.hist, p) - free_normal_residual(in, mat, cs.hist, q)) / (2 * h);
    }
    EXPECT_LT((K - F).norm(), 1e-5 * K.norm()) << "mask " << mask;
  }
}

TEST(CrackingElement, FixedNormalMatrixIgnoresRotation) {
  const Material mat = concrete();
  const ElementInput in = distorted_input(5u);
  Eigen::VectorXd Ue(16);
  for (int a = 0; a < 8; ++a) {
    Ue(2 * a) = 1e-4 * (0.8 * in.coords[a].x() + 0.5 * in.coords[a].y());
    Ue(2 * a + 1) = 1e-4 * (0.1 * in.coords[a].x() + 0.3 * in.coords[a].y());
  }
  Ue = zero_virtual(in, Ue);
  CrackState free_crack;
  free_crack.geom = make_crack_geometry(in.corners(), crack_normal(center_B(in) * Ue).n);
  CrackState frozen = free_crack;
  frozen.frozen = true;
  const Eigen::Vector2d zeta(2 * mat.zeta0(), 0.3 * mat.zeta0());
  const ElementMatrices a = assemble_cracked(in, mat, free_crack, Ue, zeta, IterationMatrix::fixed_normal, 1e-9);
  const ElementMatrices b = assemble_cracked(in, mat, frozen, Ue, zeta, IterationMatrix::consistent, 1e-9);
  const ElementMatrices c = assemble_cracked(in, mat, free_crack, Ue, zeta, IterationMatrix::consistent, 1e-9);
  EXPECT_EQ(a.K, b.K);
  EXPECT_EQ(a.R, c.R);
  EXPECT_GT((a.K - c.K).norm(), 1e-6 * a.K.norm());
}

TEST(CrackingElement, ScatterAndGatherFollowSlots) {
  Mesh mesh = acem::testing::quad_grid(2, 1);
  mesh.upgrade_element(0, true);
  const std::vector<int> s0 = element_scatter(mesh, 0);
  const std::vector<int> s1 = element_scatter(mesh, 1);
  ASSERT_EQ(s0.size(), 18u);
  ASSERT_EQ(s1.size(), 16u);
  const NodeId center = mesh.element(0).center;
  EXPECT_EQ(s0[16], 2 * center);
  EXPECT_EQ(s0[17], 2 * center + 1);
  int virtual_rows = 0;
  for (int v : s1) virtual_rows += v == -1;
  EXPECT_EQ(virtual_rows, 6);

  Eigen::VectorXd U = Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(2 * mesh.num_nodes()), 1, 2);
  const Eigen::VectorXd Ue = gather_displacements(mesh, 1, U);
  for (int r = 0; r < 16; ++r) EXPECT_EQ(Ue(r), s1[r] < 0 ? 0.0 : U(s1[r]));
}
