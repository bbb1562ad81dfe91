#include <gtest/gtest.h>

#include <array>
#include <bit>
#include <limits>
#include <cmath>
#include <random>

#include "acem/cracking_element.hpp"
#include "acem/error.hpp"
#include "acem/model.hpp"
#include "acem/shape_functions.hpp"
#include "acem/solver.hpp"
#include "test_support.hpp"

using namespace acem;

namespace {

std::vector<Vec2> square_q8(double s = 1.0) {
  return {{0, 0}, {s, 0}, {s, s}, {0, s}, {0.5 * s, 0}, {s, 0.5 * s}, {0.5 * s, s}, {0, 0.5 * s}};
}

std::vector<Vec2> with_midpoints(const std::vector<Vec2>& corners) {
  std::vector<Vec2> out = corners;
  const std::size_t tp = corners.size();
  for (std::size_t i = 0; i < tp; ++i) out.push_back(0.5 * (corners[i] + corners[(i + 1) % tp]));
  return out;
}

std::array<NodeId, 4> econn_for(int tp, unsigned mask) {
  std::array<NodeId, 4> e{kNoNode, kNoNode, kNoNode, kNoNode};
  for (int i = 0; i < tp; ++i) {
    if (mask & (1u << i)) e[i] = 100 + i;
  }
  return e;
}

/// Variable-node transition element written from scratch: corners take the
/// linear function minus half of each present adjacent midside function.
std::array<double, 8> transition_N(int tp, double xi, double eta, unsigned mask) {
  std::array<double, 8> N{};
  if (tp == 4) {
    const double cx[4] = {-1, 1, 1, -1}, cy[4] = {-1, -1, 1, 1};
    for (int i = 0; i < 4; ++i) N[i] = 0.25 * (1 + cx[i] * xi) * (1 + cy[i] * eta);
    const double mid[4] = {0.5 * (1 - xi * xi) * (1 - eta), 0.5 * (1 + xi) * (1 - eta * eta),
                           0.5 * (1 - xi * xi) * (1 + eta), 0.5 * (1 - xi) * (1 - eta * eta)};
    for (int i = 0; i < 4; ++i) {
      if (!(mask & (1u << i))) continue;
      N[4 + i] = mid[i];
      N[i] -= 0.5 * mid[i];
      N[(i + 1) % 4] -= 0.5 * mid[i];
    }
  } else {
    const double L[3] = {1 - xi - eta, xi, eta};
    for (int i = 0; i < 3; ++i) N[i] = L[i];
    for (int i = 0; i < 3; ++i) {
      if (!(mask & (1u << i))) continue;
      const double m = 4 * L[i] * L[(i + 1) % 3];
      N[3 + i] = m;
      N[i] -= 0.5 * m;
      N[(i + 1) % 3] -= 0.5 * m;
    }
  }
  return N;
}

}  // namespace

TEST(ShapeFunctions, Q8CenterValues) {
  const auto c = square_q8();
  const ShapeEval ev = eval_full(4, 0.0, 0.0, c);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(ev.N[i], -0.25, 1e-15);
  for (int i = 4; i < 8; ++i) EXPECT_NEAR(ev.N[i], 0.5, 1e-15);
}

TEST(ShapeFunctions, T6BarycenterValues) {
  const auto c = with_midpoints({{0, 0}, {1, 0}, {0, 1}});
  const ShapeEval ev = eval_full(3, 1.0 / 3.0, 1.0 / 3.0, c);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(ev.N[i], -1.0 / 9.0, 1e-15);
  for (int i = 3; i < 6; ++i) EXPECT_NEAR(ev.N[i], 4.0 / 9.0, 1e-15);
}

TEST(ShapeFunctions, KroneckerAtNodes) {
  const auto c = square_q8(2.0);
  const double px[8] = {-1, 1, 1, -1, 0, 1, 0, -1}, py[8] = {-1, -1, 1, 1, -1, 0, 1, 0};
  for (int a = 0; a < 8; ++a) {
    const ShapeEval ev = eval_full(4, px[a], py[a], c);
    for (int b = 0; b < 8; ++b) EXPECT_NEAR(ev.N[b], a == b ? 1.0 : 0.0, 1e-14);
  }
}

TEST(ShapeFunctions, PartitionOfUnityUnderEveryFold) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto c = with_midpoints({{0, 0}, {1.2, 0.1}, {1.0, 0.9}, {-0.1, 1.1}});
  for (unsigned mask = 0; mask < 16; ++mask) {
    const auto econn = econn_for(4, mask);
    for (int k = 0; k < 10; ++k) {
      const ShapeEval ev = eval_folded(4, u(rng), u(rng), c, std::span<const NodeId>(econn.data(), 4));
      double s = 0, sx = 0, sy = 0;
      for (int a = 0; a < 8; ++a) {
        s += ev.N[a];
        sx += ev.dN[0][a];
        sy += ev.dN[1][a];
      }
      EXPECT_NEAR(s, 1.0, 1e-14);
      EXPECT_NEAR(sx, 0.0, 1e-13);
      EXPECT_NEAR(sy, 0.0, 1e-13);
    }
  }
}

TEST(ShapeFunctions, FoldWithoutEdgeNodesGivesBilinear) {
  const auto c = square_q8();
  const auto econn = econn_for(4, 0);
  const ShapeEval ev = eval_folded(4, 0.0, 0.0, c, std::span<const NodeId>(econn.data(), 4));
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(ev.N[i], 0.25, 1e-15);
  for (int i = 4; i < 8; ++i) {
    EXPECT_EQ(ev.N[i], 0.0);
    EXPECT_EQ(ev.dN[0][i], 0.0);
    EXPECT_EQ(ev.dN[1][i], 0.0);
  }
}

TEST(ShapeFunctions, FoldWithAllEdgeNodesIsIdentity) {
  const auto c = square_q8();
  const auto econn = econn_for(4, 15);
  const ShapeEval full = eval_full(4, 0.3, -0.7, c);
  const ShapeEval folded = apply_virtual_node_fold(full, std::span<const NodeId>(econn.data(), 4));
  for (int i = 0; i < 8; ++i) {
    EXPECT_EQ(folded.N[i], full.N[i]);
    EXPECT_EQ(folded.dN[0][i], full.dN[0][i]);
    EXPECT_EQ(folded.dN[1][i], full.dN[1][i]);
  }
}

TEST(ShapeFunctions, FoldMatchesTransitionElement) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int tp : {3, 4}) {
    const auto c = tp == 4 ? with_midpoints({{0, 0}, {1.3, 0.2}, {1.1, 1.0}, {0.1, 0.8}})
                           : with_midpoints({{0, 0}, {1.0, 0.2}, {0.3, 0.9}});
    for (unsigned mask = 0; mask < (1u << tp); ++mask) {
      const auto econn = econn_for(tp, mask);
      for (int k = 0; k < 20; ++k) {
        double xi = u(rng), eta = u(rng);
        if (tp == 4) {
          xi = 2 * xi - 1;
          eta = 2 * eta - 1;
        } else if (xi + eta > 1) {
          xi = 1 - xi;
          eta = 1 - eta;
        }
        const ShapeEval ev = eval_folded(tp, xi, eta, c, std::span<const NodeId>(econn.data(), tp));
        const auto ref = transition_N(tp, xi, eta, mask);
        for (int a = 0; a < 2 * tp; ++a) EXPECT_NEAR(ev.N[a], ref[a], 1e-14) << "tp " << tp << " mask " << mask;
      }
    }
  }
}

TEST(ShapeFunctions, SingularJacobianThrows) {
  const auto c = with_midpoints({{0, 0}, {1, 0}, {2, 0}, {1, 0}});
  EXPECT_THROW(eval_full(4, 0.0, 0.0, c), GeometryError);
}

TEST(Quadrature, WeightsAndExactness) {
  double wq = 0, integral = 0;
  for (const auto& p : quadrature(4).points) {
    wq += p.weight;
    integral += p.weight * p.xi * p.xi * p.eta * p.eta;
  }
  EXPECT_NEAR(wq, 4.0, 1e-14);
  EXPECT_NEAR(integral, 4.0 / 9.0, 1e-14);
  EXPECT_EQ(quadrature(4).points.size(), 9u);

  double wt = 0, quad = 0;
  for (const auto& p : quadrature(3).points) {
    wt += p.weight;
    quad += p.weight * p.xi * p.eta;
  }
  EXPECT_NEAR(wt, 0.5, 1e-15);
  EXPECT_NEAR(quad, 1.0 / 24.0, 1e-15);
  EXPECT_EQ(quadrature(3).points.size(), 3u);
}

TEST(BMatrix, RigidTranslationAndLinearField) {
  const auto c = with_midpoints({{0, 0}, {1.3, 0.2}, {1.1, 1.0}, {0.1, 0.8}});
  for (unsigned mask : {0u, 5u, 15u}) {
    const auto econn = econn_for(4, mask);
    const ShapeEval ev = eval_folded(4, 0.2, -0.4, c, std::span<const NodeId>(econn.data(), 4));
    const BMatrix B = build_B(ev);
    Eigen::VectorXd shift(16), ux(16);
    for (int a = 0; a < 8; ++a) {
      shift.segment<2>(2 * a) << 0.3, -0.2;
      ux.segment<2>(2 * a) << c[a].x(), 0.0;
    }
    EXPECT_LT((B * shift).norm(), 1e-14);
    const Voigt e = B * ux;
    EXPECT_NEAR(e(0), 1.0, 1e-13);
    EXPECT_NEAR(e(1), 0.0, 1e-13);
    EXPECT_NEAR(e(2), 0.0, 1e-13);
    for (int i = 0; i < 4; ++i) {
      if (mask & (1u << i)) continue;
      EXPECT_EQ(B.col(2 * (4 + i)).norm(), 0.0);
      EXPECT_EQ(B.col(2 * (4 + i) + 1).norm(), 0.0);
    }
  }
}

TEST(UncrackedElement, UnitSquareMatchesDenseIntegration) {
  Mesh mesh = acem::testing::quad_grid(1, 1);
  const Material mat{1.0, 0.0, std::numeric_limits<double>::infinity(), 1.0};
  const ElementMatrices m = assemble_uncracked(element_input(mesh, 0), mat, Eigen::VectorXd::Zero(16));
  EXPECT_NEAR(m.K(0, 0), 0.5, 1e-14);

  // Independent oracle: bilinear gradients on a 200 x 200 midpoint grid.
  const double cx[4] = {0, 1, 1, 0}, cy[4] = {0, 0, 1, 1};
  Eigen::Matrix<double, 8, 8> ref = Eigen::Matrix<double, 8, 8>::Zero();
  const int n = 200;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x = (i + 0.5) / n, y = (j + 0.5) / n;
      Eigen::Matrix<double, 3, 8> B = Eigen::Matrix<double, 3, 8>::Zero();
      for (int a = 0; a < 4; ++a) {
        const double sx = cx[a] ? 1 : -1, sy = cy[a] ? 1 : -1;
        const double dx = sx * (cy[a] ? y : 1 - y), dy = sy * (cx[a] ? x : 1 - x);
        B(0, 2 * a) = dx;
        B(1, 2 * a + 1) = dy;
        B(2, 2 * a) = dy;
        B(2, 2 * a + 1) = dx;
      }
      Eigen::Matrix3d C;
      C << 1, 0, 0, 0, 1, 0, 0, 0, 0.5;
      ref += B.transpose() * C * B / (n * n);
    }
  }
  for (int a = 0; a < 8; ++a) {
    for (int b = 0; b < 8; ++b) EXPECT_NEAR(m.K(a, b), ref(a, b), 1e-5);
  }
}

TEST(UncrackedElement, RigidModesAndZeroVirtualRows) {
  const Material mat = acem::testing::concrete();
  for (unsigned mask = 0; mask < 16; ++mask) {
    ElementInput in;
    in.tp = 4;
    in.coords = with_midpoints({{0, 0}, {1.3, 0.2}, {1.1, 1.0}, {0.1, 0.8}});
    const auto econn = econn_for(4, mask);
    in.econn.assign(econn.begin(), econn.end());
    const ElementMatrices m = assemble_uncracked(in, mat, Eigen::VectorXd::Zero(16));
    Eigen::VectorXd tx = Eigen::VectorXd::Zero(16), ty = tx, rot = tx;
    for (int a = 0; a < 8; ++a) {
      tx(2 * a) = 1;
      ty(2 * a + 1) = 1;
      rot(2 * a) = -in.coords[a].y();
      rot(2 * a + 1) = in.coords[a].x();
    }
    const double scale = m.K.norm();
    EXPECT_LT((m.K * tx).norm(), 1e-10 * scale);
    EXPECT_LT((m.K * ty).norm(), 1e-10 * scale);
    EXPECT_LT((m.K * rot).norm(), 1e-10 * scale);
    int zero_rows = 0;
    for (int r = 0; r < 16; ++r) {
      if (m.K.row(r).cwiseAbs().maxCoeff() == 0.0 && m.K.col(r).cwiseAbs().maxCoeff() == 0.0) ++zero_rows;
    }
    EXPECT_EQ(zero_rows, 2 * (4 - std::popcount(mask)));
  }
}

namespace {

Eigen::Vector2d affine(const Vec2& p) {
  return {1e-3 * (0.3 + 2.0 * p.x() - 0.7 * p.y()), 1e-3 * (-0.1 + 0.4 * p.x() + 1.5 * p.y())};
}
const Voigt kAffineStrain = 1e-3 * Voigt(2.0, 1.5, -0.7 + 0.4);

/// Center element of a distorted 3x3 grid (quads) or of a 3x3 grid split into
/// triangles, with edge nodes on the edges selected by `mask`.
Mesh pattern_patch(int tp, unsigned mask, ElementId& target) {
  Mesh mesh;
  for (int j = 0; j <= 3; ++j) {
    for (int i = 0; i <= 3; ++i) {
      const bool inner = i > 0 && i < 3 && j > 0 && j < 3;
      const double dx = inner ? 0.08 * ((i + 2 * j) % 3 - 1) : 0.0;
      const double dy = inner ? 0.06 * ((2 * i + j) % 3 - 1) : 0.0;
      mesh.add_node(i + dx, j + dy);
    }
  }
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) {
      const NodeId a = j * 4 + i;
      if (tp == 4) {
        const std::vector<NodeId> c{a, a + 1, a + 5, a + 4};
        mesh.add_element(4, c);
      } else {
        const std::vector<NodeId> c1{a, a + 1, a + 5}, c2{a, a + 5, a + 4};
        mesh.add_element(3, c1);
        mesh.add_element(3, c2);
      }
    }
  }
  target = tp == 4 ? 4 : 8;
  const Element el = mesh.element(target);
  for (int i = 0; i < tp; ++i) {
    if (!(mask & (1u << i))) continue;
    const auto [a, b] = el.edge(i);
    for (ElementId o : mesh.elements_on_edge(a, b)) {
      if (o != target) mesh.upgrade_element(o, false);
    }
  }
  return mesh;
}

}  // namespace

TEST(PatchTest, EveryEdgeNodePatternReproducesConstantStrain) {
  const Material mat = acem::testing::concrete();
  for (int tp : {4, 3}) {
    for (unsigned mask = 0; mask < (1u << tp); ++mask) {
      ElementId target = 0;
      Mesh mesh = pattern_patch(tp, mask, target);
      ASSERT_EQ(mesh.element(target).enrichment_mask(), mask);

      for (std::size_t n = 0; n < mesh.num_nodes(); ++n) {
        const Node& node = mesh.nodes()[n];
        const bool boundary = node.x == 0.0 || node.x == 3.0 || node.y == 0.0 || node.y == 3.0;
        if (!boundary) continue;
        const Eigen::Vector2d u = affine(node.pos());
        mesh.add_bc({static_cast<NodeId>(n), 0, u.x(), BcKind::disp});
        mesh.add_bc({static_cast<NodeId>(n), 1, u.y(), BcKind::disp});
      }
      Model model(mesh, {mat});
      SolverOptions opt;
      const NewtonResult r = newton_solve(model, 1.0, opt);
      ASSERT_TRUE(r.converged);
      EXPECT_EQ(r.iterations, 1);

      for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const ElementInput in = element_input(model.mesh(), static_cast<ElementId>(e));
        const Eigen::VectorXd Ue = model.element_displacements(static_cast<ElementId>(e));
        for (const auto& q : quadrature(tp).points) {
          const BMatrix B = build_B(eval_folded(tp, q.xi, q.eta, in.coords, in.econn));
          const Voigt eps = B * Ue;
          EXPECT_LT((eps - kAffineStrain).norm(), 1e-12 * kAffineStrain.norm())
              << "tp " << tp << " mask " << mask << " element " << e;
        }
      }
      const ElementMatrices km = assemble_uncracked(element_input(model.mesh(), target), mat,
                                                    model.element_displacements(target));
      const std::vector<int> scatter = element_scatter(model.mesh(), target);
      for (int i = 0; i < tp; ++i) {
        if (mask & (1u << i)) continue;
        for (int d = 0; d < 2; ++d) {
          const int r = 2 * (tp + i) + d;
          EXPECT_EQ(km.K.row(r).cwiseAbs().maxCoeff(), 0.0);
          EXPECT_EQ(km.K.col(r).cwiseAbs().maxCoeff(), 0.0);
          EXPECT_EQ(scatter[r], -1);
        }
      }
    }
  }
}
