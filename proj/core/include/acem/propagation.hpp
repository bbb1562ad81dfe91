/**
 * @file propagation.hpp
 * @brief Crack orientation, cracking indicator, region search and adaptive
 *        node insertion.
 */
#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "acem/model.hpp"

namespace acem {

struct PrincipalDirection {
  Vec2 n{1.0, 0.0};  ///< unit eigenvector of the largest principal strain
  double eps1 = 0.0;  ///< largest principal strain
};

/// Largest principal strain of the Voigt strain (engineering shear) and its
/// unit eigenvector, sign-fixed so n_y >= 0 (n_x >= 0 when n_y == 0).
/// An isotropic strain returns n = (1, 0).
PrincipalDirection crack_normal(const Voigt& eps_hat, ShearConvention convention = ShearConvention::tensor);

/// phi = [n_x^2, n_y^2, 2 n_x n_y] C eps_hat - f_t, i.e. sigma_nn - f_t.
double cracking_indicator(const Voigt& eps_hat, const Material& mat,
                          ShearConvention convention = ShearConvention::tensor);
/// Indicator for an uncracked element of the model; -inf for materials that cannot crack.
double cracking_indicator(const Model& model, ElementId e);

struct RegionPartition {
  std::vector<ElementId> cracked;
  std::vector<ElementId> propagation;  ///< uncracked, shares an edge with a cracked element
  std::vector<ElementId> root_search;  ///< all other uncracked elements
};

RegionPartition partition_regions(const Model& model);

/// Node insertion around a newly cracked element: level 0 upgrades the
/// element with a center node; level 1 adds edge nodes to edge-sharing
/// neighbours; level 2 to node-sharing neighbours. Returns created nodes.
std::vector<NodeId> enrich_for_level(Model& model, ElementId e, AdaptiveLevel level);

/// Turns `e` into a cracking element with normal from its current strain.
void crack_element(Model& model, ElementId e);

/// Creates a pre-existing crack with a frozen normal and recorded history.
void embed_crack(Model& model, const EmbeddedCrack& crack);

/// Next element to crack: argmax phi > 0 over the propagation region, then
/// over the root-search region. Ties go to the lowest element id.
std::optional<ElementId> next_cracking_element(const Model& model);

/// Cracks elements one at a time, re-equilibrating after each, until no
/// element exceeds the strength. Returns the elements cracked, in order.
std::vector<ElementId> search_step(Model& model, const std::function<void(Model&)>& reequilibrate);

/// Refreshes n (unless frozen), t, l_c, A and V of every cracking element
/// from the current displacement field.
void update_crack_geometry(Model& model);

/// Freezes normals of cracks whose recorded opening exceeds zeta_0 (when the
/// model option is on) after updating histories. Called at load-step end.
void update_crack_histories(Model& model);

}  // namespace acem
