/**
 * @file model.hpp
 * @brief Simulation state: mesh, materials, per-element crack data and the
 *        global unknown vector.
 *
 * Every node owns two consecutive global DOFs (2*id, 2*id+1): displacements
 * for corner and edge nodes, crack openings (zeta_n, zeta_t) for center nodes.
 */
#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "acem/cohesive_law.hpp"
#include "acem/cracking_element.hpp"
#include "acem/mesh.hpp"

namespace acem {

enum class AdaptiveLevel { level0 = 0, level1 = 1, level2 = 2 };

/// Both conventions evaluate the same principal strain; see crack_normal().
enum class ShearConvention { tensor, as_printed };

struct ModelOptions {
  AdaptiveLevel level = AdaptiveLevel::level0;
  bool freeze_normal = true;
  ShearConvention shear_convention = ShearConvention::tensor;
};

struct ElementState {
  std::optional<CrackState> crack;
  bool cracked() const { return crack.has_value(); }
};

/// A pre-existing crack: `angle_deg` is the direction of the crack line
/// measured from the x axis; `opening` seeds zeta_mx.
struct EmbeddedCrack {
  ElementId element = 0;
  double angle_deg = 0.0;
  double opening = 0.0;
};

class Model {
 public:
  Model(Mesh mesh, std::vector<Material> materials, ModelOptions options = {});

  const Mesh& mesh() const { return mesh_; }
  const std::vector<Material>& materials() const { return materials_; }
  const Material& material_of(ElementId e) const { return materials_[mesh_.element(e).material]; }
  const ModelOptions& options() const { return options_; }
  void set_options(const ModelOptions& o) { options_ = o; }

  const ElementState& state(ElementId e) const { return states_.at(e); }
  ElementState& state(ElementId e) { return states_.at(e); }
  const std::vector<ElementState>& states() const { return states_; }
  std::size_t num_cracked() const;

  Eigen::VectorXd& U() { return U_; }
  const Eigen::VectorXd& U() const { return U_; }
  std::size_t num_dofs() const { return 2 * mesh_.num_nodes(); }

  double load() const { return load_; }
  void set_load(double d) { load_ = d; }

  /// Upgrades element `e` in the mesh and initialises the new DOFs: edge
  /// nodes take the current (linear-along-edge) field at their position,
  /// center nodes start with zero opening.
  std::vector<NodeId> upgrade(ElementId e, bool add_center);

  Eigen::VectorXd element_displacements(ElementId e) const { return gather_displacements(mesh_, e, U_); }
  Eigen::Vector2d zeta(ElementId e) const;
  /// Center-representation strain B1 * U_e.
  Voigt strain_hat(ElementId e) const;

 private:
  Mesh mesh_;
  std::vector<Material> materials_;
  ModelOptions options_;
  std::vector<ElementState> states_;
  Eigen::VectorXd U_;
  double load_ = 0.0;
};

}  // namespace acem
