/**
 * @file mesh.hpp
 * @brief Hybrid linear/quadratic 2D mesh with adaptive edge and center nodes.
 *
 * Elements start as Q4/T3 and are upgraded in place: edge nodes are shared
 * through an edge map so that a neighbour of an upgraded element sees the new
 * node as a hanging node in the corresponding econn slot.
 */
#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "acem/types.hpp"

namespace acem {

enum class NodeKind { corner, edge, center };

struct Node {
  double x = 0.0;
  double y = 0.0;
  NodeKind kind = NodeKind::corner;
  /// Corner nodes of the parent edge (edge nodes) or element (center nodes, first slot).
  std::array<NodeId, 2> parents{kNoNode, kNoNode};

  Vec2 pos() const { return {x, y}; }
};

struct Element {
  int tp = 4;                                 ///< 3 = triangle, 4 = quadrilateral
  std::array<NodeId, 4> corners{kNoNode, kNoNode, kNoNode, kNoNode};
  /// Slot i holds the node on the edge between corners i and (i+1) % tp.
  std::array<NodeId, 4> econn{kNoNode, kNoNode, kNoNode, kNoNode};
  NodeId center = kNoNode;
  int material = 0;

  bool has_center() const { return center != kNoNode; }
  int edge_node_count() const;
  /// Bit i set when econn slot i is occupied.
  unsigned enrichment_mask() const;
  std::pair<NodeId, NodeId> edge(int i) const { return {corners[i], corners[(i + 1) % tp]}; }
};

enum class BcKind { disp, force };

/// A `disp` row prescribes u = value * d (d is the load parameter); a `force`
/// row applies a constant nodal force `value`.
struct BoundaryCondition {
  NodeId node = kNoNode;
  int dof = 0;  ///< 0 = x, 1 = y
  double value = 0.0;
  BcKind kind = BcKind::disp;
};

/// New edge nodes on boundary edges whose corners both belong to `nodes` are
/// projected radially onto the circle.
struct BoundaryCircle {
  double cx = 0.0;
  double cy = 0.0;
  double r = 1.0;
  std::vector<NodeId> nodes;  ///< sorted

  bool contains(NodeId n) const;
};

enum class NeighborMode { shares_edge, shares_node };

using EdgeKey = std::pair<NodeId, NodeId>;
inline EdgeKey make_edge_key(NodeId a, NodeId b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

class Mesh {
 public:
  NodeId add_node(double x, double y, NodeKind kind = NodeKind::corner);
  /// Adds a linear element; corners must already exist. Validates orientation.
  ElementId add_element(int tp, std::span<const NodeId> corners, int material = 0);
  void add_bc(const BoundaryCondition& bc) { bcs_.push_back(bc); }
  void add_boundary_circle(BoundaryCircle c);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Element>& elements() const { return elements_; }
  const Node& node(NodeId id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  const Element& element(ElementId id) const { return elements_.at(static_cast<std::size_t>(id)); }
  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_elements() const { return elements_.size(); }
  const std::vector<BoundaryCondition>& bcs() const { return bcs_; }
  const std::vector<BoundaryCircle>& boundary_circles() const { return circles_; }

  /// Every distinct corner edge, mapped to its edge node (kNoNode when none).
  const std::map<EdgeKey, NodeId>& edge_map() const { return edge_map_; }
  NodeId edge_node(NodeId a, NodeId b) const;
  const std::vector<ElementId>& elements_on_edge(NodeId a, NodeId b) const;
  const std::vector<ElementId>& elements_at_node(NodeId n) const;

  /// Gives every edge of `e` an edge node (reusing existing ones) and, when
  /// requested, a center node. Neighbours sharing an edge get the node in
  /// their econn slot. Edge nodes inherit `disp` conditions shared by both
  /// parent corners. Returns the ids of nodes created by this call.
  std::vector<NodeId> upgrade_element(ElementId e, bool add_center);

  /// Elements (excluding `e`) sharing an edge or at least one corner node, ascending.
  std::vector<ElementId> neighbors(ElementId e, NeighborMode mode) const;

  /// Corner coordinates of element `e` in local order.
  std::vector<Vec2> corner_coords(ElementId e) const;
  /// Coordinates of the 2*tp shape-function nodes; absent edge nodes are
  /// placed at the midpoint of their corners (virtual nodes).
  std::vector<Vec2> element_coords(ElementId e) const;
  /// Node ids for the 2*tp shape-function slots; kNoNode for virtual slots.
  std::vector<NodeId> element_slots(ElementId e) const;
  Vec2 centroid(ElementId e) const;
  /// sqrt of the mean corner-polygon area.
  double characteristic_size() const;

  /// Throws TopologyError when an element references a missing node, a node is
  /// unused, or an element is inverted.
  void validate() const;

 private:
  void register_edges(ElementId e);
  NodeId create_edge_node(NodeId a, NodeId b);

  std::vector<Node> nodes_;
  std::vector<Element> elements_;
  std::vector<BoundaryCondition> bcs_;
  std::vector<BoundaryCircle> circles_;
  std::map<EdgeKey, NodeId> edge_map_;
  std::map<EdgeKey, std::vector<ElementId>> edge_elements_;
  std::vector<std::vector<ElementId>> node_elements_;
};

/// Reads the line-oriented mesh format (sections NODES, ELEMENTS, BC,
/// BOUNDARY_CURVE, QUADRATIC). Throws ParseError / TopologyError.
Mesh load_mesh(const std::filesystem::path& path);
Mesh parse_mesh(std::istream& in, const std::string& source_name = "<mesh>");
/// Writes the corner mesh (linear elements) plus BC and curve sections.
void write_mesh(const Mesh& mesh, std::ostream& out);

}  // namespace acem
