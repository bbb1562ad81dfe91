#include "acem/model.hpp"

#include <algorithm>

#include "acem/error.hpp"

namespace acem {

Model::Model(Mesh mesh, std::vector<Material> materials, ModelOptions options)
    : mesh_(std::move(mesh)), materials_(std::move(materials)), options_(options) {
  if (materials_.empty()) throw ConfigError("model needs at least one material");
  for (const Material& m : materials_) m.validate();
  for (const Element& el : mesh_.elements()) {
    if (el.material < 0 || static_cast<std::size_t>(el.material) >= materials_.size()) {
      throw ConfigError("element references undefined material " + std::to_string(el.material));
    }
  }
  states_.resize(mesh_.num_elements());
  U_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(num_dofs()));
}

std::size_t Model::num_cracked() const {
  return static_cast<std::size_t>(
      std::count_if(states_.begin(), states_.end(), [](const ElementState& s) { return s.cracked(); }));
}

std::vector<NodeId> Model::upgrade(ElementId e, bool add_center) {
  const std::vector<NodeId> created = mesh_.upgrade_element(e, add_center);
  const Eigen::Index old = U_.size();
  U_.conservativeResize(static_cast<Eigen::Index>(num_dofs()));
  U_.tail(U_.size() - old).setZero();
  for (NodeId n : created) {
    const Node& node = mesh_.node(n);
    if (node.kind != NodeKind::edge) continue;
    const auto [a, b] = node.parents;
    U_.segment<2>(2 * n) = 0.5 * (U_.segment<2>(2 * a) + U_.segment<2>(2 * b));
  }
  return created;
}

Eigen::Vector2d Model::zeta(ElementId e) const {
  const Element& el = mesh_.element(e);
  if (!el.has_center()) return Eigen::Vector2d::Zero();
  return U_.segment<2>(2 * el.center);
}

Voigt Model::strain_hat(ElementId e) const {
  return acem::strain_hat(center_B(element_input(mesh_, e)), element_displacements(e));
}

}  // namespace acem
