/**
 * @file solver.hpp
 * @brief Global assembly, Newton iterations and displacement-controlled loading.
 */
#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "acem/model.hpp"

namespace acem {

/// Node-to-DOF numbering: node id k owns DOFs 2k and 2k+1. Indices never
/// change once assigned and grow with the mesh.
struct DofMap {
  static int index(NodeId node, int component) { return 2 * node + component; }
  static std::size_t size(const Mesh& mesh) { return 2 * mesh.num_nodes(); }
};

struct SolverOptions {
  double tol_rel = 1e-6;
  /// Absolute tolerance = tol_abs_factor * max(E) * mesh characteristic size.
  double tol_abs_factor = 1e-10;
  int max_iter = 50;
  int max_bisections = 8;
  /// The paper matrix is also used for any iteration whose consistent matrix is singular.
  IterationMatrix iteration_matrix = IterationMatrix::consistent;
  /// Multiple of the full-integration displacement block added to the consistent matrix.
  double stabilization = 1e-9;
  /// Called once per Newton iteration with (iteration, |R_free|, reference).
  std::function<void(int, double, double)> monitor;
};

struct GlobalSystem {
  Eigen::SparseMatrix<double> K;
  Eigen::VectorXd R;  ///< F_ext - F_int over all DOFs (constrained rows included)
};

/// K = sum of element K, R = F_ext + sum of element R. Virtual slots are never scattered.
GlobalSystem assemble_global(const Model& model, IterationMatrix matrix = IterationMatrix::consistent,
                             double stabilization = 0.0);

/// F_int at the current state (sum of -R^(e)).
Eigen::VectorXd internal_forces(const Model& model);

/// Work-conjugate force of the load parameter: sum over `disp` rows of value * F_int.
double reaction_force(const Model& model);

struct NewtonResult {
  bool converged = false;
  int iterations = 0;  ///< linear solves performed
  double residual = 0.0;
  double reference = 0.0;
};

/// Drives the prescribed DOFs to value * target and iterates
/// K dU = R until |R_free| <= tol_abs + tol_rel |R_ref|, refreshing the crack
/// geometry every iteration. If the consistent matrix fails, the solve is
/// retried once with free normals held at their starting values.
/// On failure the model holds the last iterate.
NewtonResult newton_solve(Model& model, double target, const SolverOptions& options);

struct StepRecord {
  int step = 0;
  double d = 0.0;
  double force = 0.0;
  int iterations = 0;
  std::size_t nodes = 0;
  std::size_t cracked = 0;
  double elapsed_s = 0.0;
};

using StepObserver = std::function<void(const Model&, const StepRecord&)>;

/// Applies each increment of `schedule` in turn: Newton solve, crack search
/// with re-equilibration, then history update. A failed increment is rolled
/// back and halved (up to max_bisections times) before SolverError is thrown.
/// One record is produced per converged (sub)increment.
std::vector<StepRecord> run_loading(Model& model, std::span<const double> schedule, const SolverOptions& options,
                                    const StepObserver& observer = {});

}  // namespace acem
