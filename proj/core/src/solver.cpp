#include "acem/solver.hpp"

#include <chrono>
#include <cmath>
#include <deque>
#include <exception>
#include <optional>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>

#include "acem/error.hpp"
#include "acem/propagation.hpp"

namespace acem {

namespace {

ElementMatrices element_matrices(const Model& model, ElementId e, IterationMatrix matrix, double stabilization) {
  const ElementInput in = element_input(model.mesh(), e);
  const Material& mat = model.material_of(e);
  const Eigen::VectorXd Ue = model.element_displacements(e);
  const ElementState& st = model.state(e);
  ElementMatrices m = st.cracked() ? assemble_cracked(in, mat, *st.crack, Ue, model.zeta(e), matrix, stabilization)
                                   : assemble_uncracked(in, mat, Ue);
  m.scatter = element_scatter(model.mesh(), e);
  return m;
}

Eigen::VectorXd external_forces(const Model& model) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.num_dofs()));
  for (const BoundaryCondition& bc : model.mesh().bcs()) {
    if (bc.kind == BcKind::force) f(DofMap::index(bc.node, bc.dof)) += bc.value;
  }
  return f;
}

double absolute_tolerance(const Model& model, const SolverOptions& options) {
  double emax = 0.0;
  for (const Material& m : model.materials()) emax = std::max(emax, m.E);
  return options.tol_abs_factor * emax * model.mesh().characteristic_size();
}

struct StepFailed {};

}  // namespace

namespace {

/// Element matrices for every element, computed in parallel; scattering stays
/// sequential so results do not depend on the thread count.
std::vector<ElementMatrices> all_element_matrices(const Model& model, IterationMatrix matrix, double stabilization) {
  const auto ne = static_cast<std::ptrdiff_t>(model.mesh().num_elements());
  std::vector<ElementMatrices> out(static_cast<std::size_t>(ne));
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < ne; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = element_matrices(model, static_cast<ElementId>(i), matrix, stabilization);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace

GlobalSystem assemble_global(const Model& model, IterationMatrix matrix, double stabilization) {
  const auto ndof = static_cast<Eigen::Index>(model.num_dofs());
  GlobalSystem sys;
  sys.R = external_forces(model);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(model.mesh().num_elements() * 18 * 18);
  for (const ElementMatrices& m : all_element_matrices(model, matrix, stabilization)) {
    const auto n = static_cast<Eigen::Index>(m.scatter.size());
    for (Eigen::Index a = 0; a < n; ++a) {
      const int ga = m.scatter[a];
      if (ga < 0) continue;
      sys.R(ga) += m.R(a);
      for (Eigen::Index b = 0; b < n; ++b) {
        const int gb = m.scatter[b];
        if (gb < 0) continue;
        triplets.emplace_back(ga, gb, m.K(a, b));
      }
    }
  }
  sys.K.resize(ndof, ndof);
  sys.K.setFromTriplets(triplets.begin(), triplets.end());
  return sys;
}

Eigen::VectorXd internal_forces(const Model& model) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.num_dofs()));
  for (const ElementMatrices& m : all_element_matrices(model, IterationMatrix::paper, 0.0)) {
    for (std::size_t a = 0; a < m.scatter.size(); ++a) {
      if (m.scatter[a] >= 0) f(m.scatter[a]) -= m.R(static_cast<Eigen::Index>(a));
    }
  }
  return f;
}

namespace {

double reaction_from(const Model& model, const Eigen::VectorXd& fint) {
  double force = 0.0;
  for (const BoundaryCondition& bc : model.mesh().bcs()) {
    if (bc.kind == BcKind::disp && bc.value != 0.0) force += bc.value * fint(DofMap::index(bc.node, bc.dof));
  }
  return force;
}

}  // namespace

double reaction_force(const Model& model) { return reaction_from(model, internal_forces(model)); }

namespace {

/// Dirichlet elimination: prescribed columns move to the right-hand side and
/// their rows become identity rows carrying the prescribed increment.
struct ReducedSystem {
  Eigen::SparseMatrix<double> A;
  Eigen::VectorXd rhs;
  double free_norm = 0.0;
};

ReducedSystem eliminate(const Eigen::SparseMatrix<double>& K, const Eigen::VectorXd& R,
                        const std::vector<char>& fixed, const Eigen::VectorXd& dc) {
  const Eigen::Index ndof = R.size();
  ReducedSystem out;
  out.rhs = R;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(K.nonZeros()));
  for (Eigen::Index k = 0; k < K.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator e(K, k); e; ++e) {
      const Eigen::Index i = e.row();
      if (fixed[i]) continue;
      if (fixed[k]) {
        out.rhs(i) -= e.value() * dc(k);
      } else {
        triplets.emplace_back(i, k, e.value());
      }
    }
  }
  double norm2 = 0.0;
  for (Eigen::Index g = 0; g < ndof; ++g) {
    if (fixed[g]) {
      out.rhs(g) = dc(g);
      triplets.emplace_back(g, g, 1.0);
    } else {
      norm2 += out.rhs(g) * out.rhs(g);
    }
  }
  out.free_norm = std::sqrt(norm2);
  out.A.resize(ndof, ndof);
  out.A.setFromTriplets(triplets.begin(), triplets.end());
  out.A.makeCompressed();
  return out;
}

/// Direct solve; empty result when the matrix is singular or the solution is not accurate.
std::optional<Eigen::VectorXd> direct_solve(const ReducedSystem& sys) {
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(sys.A);
  lu.factorize(sys.A);
  if (lu.info() != Eigen::Success) return std::nullopt;
  Eigen::VectorXd x = lu.solve(sys.rhs);
  if (lu.info() != Eigen::Success || !x.allFinite()) return std::nullopt;
  if ((sys.A * x - sys.rhs).norm() > 1e-8 * sys.rhs.norm()) return std::nullopt;
  return x;
}

/// Newton iterations toward `target`. Normals of free cracks follow U when
/// update_normals is set; a negative reference uses the first residual.
NewtonResult newton_attempt(Model& model, double target, const SolverOptions& options, IterationMatrix matrix,
                            bool update_normals, double reference) {
  const auto ndof = static_cast<Eigen::Index>(model.num_dofs());
  std::vector<char> fixed(static_cast<std::size_t>(ndof), 0);
  Eigen::VectorXd prescribed = Eigen::VectorXd::Zero(ndof);
  for (const BoundaryCondition& bc : model.mesh().bcs()) {
    if (bc.kind != BcKind::disp) continue;
    const int g = DofMap::index(bc.node, bc.dof);
    fixed[g] = 1;
    prescribed(g) = bc.value * target;
  }
  const double tol_abs = absolute_tolerance(model, options);

  NewtonResult result;
  for (int it = 0;; ++it) {
    if (update_normals) update_crack_geometry(model);
    const GlobalSystem sys = assemble_global(model, matrix, options.stabilization);

    Eigen::VectorXd dc = Eigen::VectorXd::Zero(ndof);
    if (it == 0) {
      for (Eigen::Index g = 0; g < ndof; ++g) {
        if (fixed[g]) dc(g) = prescribed(g) - model.U()(g);
      }
    }
    const ReducedSystem reduced = eliminate(sys.K, sys.R, fixed, dc);
    result.residual = reduced.free_norm;
    if (it == 0) result.reference = reference >= 0.0 ? reference : reduced.free_norm;
    if (options.monitor) options.monitor(it, reduced.free_norm, result.reference);
    if (!std::isfinite(reduced.free_norm)) return result;
    const bool has_increment = it == 0 && dc.lpNorm<Eigen::Infinity>() > 0.0;
    if (!has_increment && reduced.free_norm <= tol_abs + options.tol_rel * result.reference) {
      result.converged = true;
      model.set_load(target);
      return result;
    }
    if (it >= options.max_iter) return result;

    std::optional<Eigen::VectorXd> delta = direct_solve(reduced);
    if (!delta && matrix != IterationMatrix::paper) {
      const GlobalSystem alt = assemble_global(model, IterationMatrix::paper);
      delta = direct_solve(eliminate(alt.K, alt.R, fixed, dc));
    }
    if (!delta) return result;
    model.U() += *delta;
    ++result.iterations;
  }
}

}  // namespace

NewtonResult newton_solve(Model& model, double target, const SolverOptions& options) {
  const Eigen::VectorXd start = model.U();
  NewtonResult r = newton_attempt(model, target, options, options.iteration_matrix, true, -1.0);
  if (r.converged || options.iteration_matrix != IterationMatrix::consistent) return r;
  // Free normals can chase each other without settling; retry with them held
  // at the values implied by the starting displacements.
  model.U() = start;
  update_crack_geometry(model);
  const int spent = r.iterations;
  r = newton_attempt(model, target, options, IterationMatrix::fixed_normal, false, r.reference);
  r.iterations += spent;
  return r;
}

std::vector<StepRecord> run_loading(Model& model, std::span<const double> schedule, const SolverOptions& options,
                                    const StepObserver& observer) {
  struct Pending {
    double dd;
    int depth;
  };
  std::deque<Pending> queue;
  for (double dd : schedule) queue.push_back({dd, 0});

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<StepRecord> history;
  while (!queue.empty()) {
    const Pending p = queue.front();
    queue.pop_front();
    const double target = model.load() + p.dd;
    Model snapshot = model;
    int iterations = 0;
    bool ok = true;
    try {
      const NewtonResult r = newton_solve(model, target, options);
      iterations += r.iterations;
      if (!r.converged) throw StepFailed{};
      search_step(model, [&](Model& m) {
        const NewtonResult rr = newton_solve(m, target, options);
        iterations += rr.iterations;
        if (!rr.converged) throw StepFailed{};
      });
    } catch (const StepFailed&) {
      ok = false;
    }
    if (!ok) {
      model = std::move(snapshot);
      if (p.depth >= options.max_bisections) {
        throw SolverError("load step to d = " + std::to_string(target) + " failed to converge after " +
                          std::to_string(options.max_bisections) + " bisections");
      }
      queue.push_front({0.5 * p.dd, p.depth + 1});
      queue.push_front({0.5 * p.dd, p.depth + 1});
      continue;
    }
    update_crack_histories(model);

    StepRecord rec;
    rec.step = static_cast<int>(history.size()) + 1;
    rec.d = model.load();
    rec.force = reaction_force(model);
    rec.iterations = iterations;
    rec.nodes = model.mesh().num_nodes();
    rec.cracked = model.num_cracked();
    rec.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    history.push_back(rec);
    if (observer) observer(model, rec);
  }
  return history;
}

}  // namespace acem
