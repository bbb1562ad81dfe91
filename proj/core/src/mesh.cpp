#include "acem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "acem/element_geometry.hpp"
#include "acem/error.hpp"
#include "format.hpp"

namespace acem {

int Element::edge_node_count() const {
  int count = 0;
  for (int i = 0; i < tp; ++i) count += econn[i] != kNoNode ? 1 : 0;
  return count;
}

unsigned Element::enrichment_mask() const {
  unsigned mask = 0;
  for (int i = 0; i < tp; ++i) {
    if (econn[i] != kNoNode) mask |= 1u << i;
  }
  return mask;
}

bool BoundaryCircle::contains(NodeId n) const { return std::binary_search(nodes.begin(), nodes.end(), n); }

NodeId Mesh::add_node(double x, double y, NodeKind kind) {
  Node node;
  node.x = x;
  node.y = y;
  node.kind = kind;
  nodes_.push_back(node);
  node_elements_.emplace_back();
  return static_cast<NodeId>(nodes_.size() - 1);
}

ElementId Mesh::add_element(int tp, std::span<const NodeId> corners, int material) {
  if (tp != 3 && tp != 4) throw TopologyError("element type must be 3 or 4, got " + std::to_string(tp));
  if (static_cast<int>(corners.size()) != tp) throw TopologyError("element corner count does not match its type");
  Element el;
  el.tp = tp;
  el.material = material;
  std::vector<Vec2> pts;
  for (int i = 0; i < tp; ++i) {
    const NodeId c = corners[i];
    if (c < 0 || static_cast<std::size_t>(c) >= nodes_.size()) {
      throw TopologyError("element " + std::to_string(elements_.size()) + " references missing node " +
                          std::to_string(c));
    }
    el.corners[i] = c;
    pts.push_back(nodes_[c].pos());
  }
  for (int i = 0; i < tp; ++i) {
    for (int j = i + 1; j < tp; ++j) {
      if (el.corners[i] == el.corners[j]) throw TopologyError("element has repeated corner nodes");
    }
  }
  // Positive Jacobian everywhere: every corner turn must be counter-clockwise.
  for (int i = 0; i < tp; ++i) {
    const Vec2 a = pts[(i + tp - 1) % tp];
    const Vec2 b = pts[i];
    const Vec2 c = pts[(i + 1) % tp];
    const Vec2 u = b - a;
    const Vec2 v = c - b;
    if (u.x() * v.y() - u.y() * v.x() <= 0.0) {
      throw TopologyError("element " + std::to_string(elements_.size()) +
                          " is inverted or non-convex (corners must be counter-clockwise)");
    }
  }
  try {
    element_area(pts);
  } catch (const GeometryError&) {
    throw TopologyError("element " + std::to_string(elements_.size()) + " is degenerate");
  }
  elements_.push_back(el);
  const auto id = static_cast<ElementId>(elements_.size() - 1);
  register_edges(id);
  return id;
}

void Mesh::register_edges(ElementId e) {
  const Element& el = elements_[e];
  for (int i = 0; i < el.tp; ++i) {
    const auto [a, b] = el.edge(i);
    const EdgeKey key = make_edge_key(a, b);
    edge_map_.try_emplace(key, kNoNode);
    edge_elements_[key].push_back(e);
    node_elements_[a].push_back(e);
  }
}

void Mesh::add_boundary_circle(BoundaryCircle c) {
  std::sort(c.nodes.begin(), c.nodes.end());
  c.nodes.erase(std::unique(c.nodes.begin(), c.nodes.end()), c.nodes.end());
  circles_.push_back(std::move(c));
}

NodeId Mesh::edge_node(NodeId a, NodeId b) const {
  const auto it = edge_map_.find(make_edge_key(a, b));
  return it == edge_map_.end() ? kNoNode : it->second;
}

const std::vector<ElementId>& Mesh::elements_on_edge(NodeId a, NodeId b) const {
  static const std::vector<ElementId> empty;
  const auto it = edge_elements_.find(make_edge_key(a, b));
  return it == edge_elements_.end() ? empty : it->second;
}

const std::vector<ElementId>& Mesh::elements_at_node(NodeId n) const { return node_elements_.at(n); }

NodeId Mesh::create_edge_node(NodeId a, NodeId b) {
  Vec2 p = 0.5 * (nodes_[a].pos() + nodes_[b].pos());
  const bool boundary_edge = elements_on_edge(a, b).size() == 1;
  if (boundary_edge) {
    for (const BoundaryCircle& c : circles_) {
      if (c.contains(a) && c.contains(b)) {
        const Vec2 center(c.cx, c.cy);
        const Vec2 r = p - center;
        if (r.norm() > 0.0) p = center + c.r * r.normalized();
        break;
      }
    }
  }
  const NodeId id = add_node(p.x(), p.y(), NodeKind::edge);
  nodes_[id].parents = {a, b};

  // Inherit Dirichlet rows shared by both parents so constrained edges stay constrained.
  std::vector<BoundaryCondition> inherited;
  for (const BoundaryCondition& ba : bcs_) {
    if (ba.kind != BcKind::disp || ba.node != a) continue;
    for (const BoundaryCondition& bb : bcs_) {
      if (bb.kind == BcKind::disp && bb.node == b && bb.dof == ba.dof && bb.value == ba.value) {
        inherited.push_back({id, ba.dof, ba.value, BcKind::disp});
        break;
      }
    }
  }
  bcs_.insert(bcs_.end(), inherited.begin(), inherited.end());
  return id;
}

std::vector<NodeId> Mesh::upgrade_element(ElementId e, bool add_center) {
  std::vector<NodeId> created;
  const int tp = elements_.at(e).tp;
  for (int i = 0; i < tp; ++i) {
    const auto [a, b] = elements_[e].edge(i);
    const EdgeKey key = make_edge_key(a, b);
    NodeId& slot = edge_map_.at(key);
    if (slot != kNoNode) continue;
    slot = create_edge_node(a, b);
    created.push_back(slot);
    for (ElementId other : edge_elements_.at(key)) {
      Element& el = elements_[other];
      for (int j = 0; j < el.tp; ++j) {
        if (make_edge_key(el.edge(j).first, el.edge(j).second) == key) el.econn[j] = slot;
      }
    }
    node_elements_[slot] = edge_elements_.at(key);
  }
  if (add_center && !elements_[e].has_center()) {
    const Element& el = elements_[e];
    // Image of the parametric center under the (now fully quadratic) element map.
    Vec2 p = Vec2::Zero();
    const double wc = tp == 4 ? -0.25 : -1.0 / 9.0;
    const double we = tp == 4 ? 0.5 : 4.0 / 9.0;
    for (int i = 0; i < tp; ++i) p += wc * nodes_[el.corners[i]].pos() + we * nodes_[el.econn[i]].pos();
    const NodeId c = add_node(p.x(), p.y(), NodeKind::center);
    nodes_[c].parents = {el.corners[0], kNoNode};
    elements_[e].center = c;
    node_elements_[c] = {e};
    created.push_back(c);
  }
  return created;
}

std::vector<ElementId> Mesh::neighbors(ElementId e, NeighborMode mode) const {
  const Element& el = elements_.at(e);
  std::set<ElementId> out;
  for (int i = 0; i < el.tp; ++i) {
    if (mode == NeighborMode::shares_edge) {
      const auto [a, b] = el.edge(i);
      for (ElementId o : elements_on_edge(a, b)) out.insert(o);
    } else {
      for (ElementId o : node_elements_[el.corners[i]]) out.insert(o);
    }
  }
  out.erase(e);
  return {out.begin(), out.end()};
}

std::vector<Vec2> Mesh::corner_coords(ElementId e) const {
  const Element& el = elements_.at(e);
  std::vector<Vec2> pts(el.tp);
  for (int i = 0; i < el.tp; ++i) pts[i] = nodes_[el.corners[i]].pos();
  return pts;
}

std::vector<Vec2> Mesh::element_coords(ElementId e) const {
  const Element& el = elements_.at(e);
  std::vector<Vec2> pts(2 * el.tp);
  for (int i = 0; i < el.tp; ++i) pts[i] = nodes_[el.corners[i]].pos();
  for (int i = 0; i < el.tp; ++i) {
    pts[el.tp + i] = el.econn[i] != kNoNode ? nodes_[el.econn[i]].pos()
                                            : Vec2(0.5 * (pts[i] + pts[(i + 1) % el.tp]));
  }
  return pts;
}

std::vector<NodeId> Mesh::element_slots(ElementId e) const {
  const Element& el = elements_.at(e);
  std::vector<NodeId> slots(2 * el.tp);
  for (int i = 0; i < el.tp; ++i) {
    slots[i] = el.corners[i];
    slots[el.tp + i] = el.econn[i];
  }
  return slots;
}

Vec2 Mesh::centroid(ElementId e) const {
  const Element& el = elements_.at(e);
  Vec2 c = Vec2::Zero();
  for (int i = 0; i < el.tp; ++i) c += nodes_[el.corners[i]].pos();
  return c / el.tp;
}

double Mesh::characteristic_size() const {
  if (elements_.empty()) return 1.0;
  double total = 0.0;
  for (std::size_t e = 0; e < elements_.size(); ++e) {
    total += element_area(corner_coords(static_cast<ElementId>(e)));
  }
  return std::sqrt(total / static_cast<double>(elements_.size()));
}

void Mesh::validate() const {
  std::vector<char> used(nodes_.size(), 0);
  for (std::size_t e = 0; e < elements_.size(); ++e) {
    const Element& el = elements_[e];
    auto mark = [&](NodeId n) {
      if (n == kNoNode) return;
      if (n < 0 || static_cast<std::size_t>(n) >= nodes_.size()) {
        throw TopologyError("element " + std::to_string(e) + " references missing node " + std::to_string(n));
      }
      used[n] = 1;
    };
    for (int i = 0; i < el.tp; ++i) {
      mark(el.corners[i]);
      mark(el.econn[i]);
    }
    mark(el.center);
    element_area(corner_coords(static_cast<ElementId>(e)));
  }
  for (std::size_t n = 0; n < used.size(); ++n) {
    if (!used[n]) throw TopologyError("node " + std::to_string(n) + " is not referenced by any element");
  }
  for (const BoundaryCondition& bc : bcs_) {
    if (bc.node < 0 || static_cast<std::size_t>(bc.node) >= nodes_.size()) {
      throw TopologyError("boundary condition references missing node " + std::to_string(bc.node));
    }
  }
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

namespace {

struct Line {
  int number;
  std::vector<std::string> tokens;
};

double to_double(const std::string& tok, const std::string& src, int line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(src, line, "expected a number, got '" + tok + "'");
  }
}

long to_int(const std::string& tok, const std::string& src, int line) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(src, line, "expected an integer, got '" + tok + "'");
  }
}

}  // namespace

Mesh parse_mesh(std::istream& in, const std::string& src) {
  static const std::set<std::string> kSections = {"NODES", "ELEMENTS", "BC", "BOUNDARY_CURVE", "QUADRATIC"};
  std::map<std::string, std::vector<Line>> sections;
  std::string current;
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    Line line{number, {}};
    for (std::string tok; ls >> tok;) line.tokens.push_back(tok);
    if (line.tokens.empty()) continue;
    if (line.tokens.size() == 1 && kSections.count(line.tokens[0])) {
      current = line.tokens[0];
      sections[current];
      continue;
    }
    if (current.empty()) throw ParseError(src, number, "data before any section header");
    sections[current].push_back(std::move(line));
  }
  if (!sections.count("NODES")) throw ParseError(src, number, "missing NODES section");
  if (!sections.count("ELEMENTS")) throw ParseError(src, number, "missing ELEMENTS section");

  const auto& node_lines = sections["NODES"];
  std::vector<std::pair<double, double>> coords(node_lines.size());
  std::vector<char> seen(node_lines.size(), 0);
  for (const Line& l : node_lines) {
    if (l.tokens.size() != 3) throw ParseError(src, l.number, "node line must be 'id x y'");
    const long id = to_int(l.tokens[0], src, l.number);
    if (id < 0 || id >= static_cast<long>(coords.size())) {
      throw ParseError(src, l.number, "node id " + std::to_string(id) + " outside 0.." +
                                          std::to_string(coords.size() - 1));
    }
    if (seen[id]) throw ParseError(src, l.number, "duplicate node id " + std::to_string(id));
    seen[id] = 1;
    coords[id] = {to_double(l.tokens[1], src, l.number), to_double(l.tokens[2], src, l.number)};
  }

  Mesh mesh;
  for (const auto& [x, y] : coords) mesh.add_node(x, y);

  const auto& elem_lines = sections["ELEMENTS"];
  std::vector<const Line*> by_id(elem_lines.size(), nullptr);
  for (const Line& l : elem_lines) {
    if (l.tokens.size() < 2) throw ParseError(src, l.number, "element line must be 'id tp n1..n_tp [material]'");
    const long id = to_int(l.tokens[0], src, l.number);
    if (id < 0 || id >= static_cast<long>(by_id.size())) {
      throw ParseError(src, l.number, "element id " + std::to_string(id) + " out of range");
    }
    if (by_id[id]) throw ParseError(src, l.number, "duplicate element id " + std::to_string(id));
    by_id[id] = &l;
  }
  for (const Line* l : by_id) {
    const long tp = to_int(l->tokens[1], src, l->number);
    if (tp != 3 && tp != 4) throw ParseError(src, l->number, "element type must be 3 or 4");
    const std::size_t expected = 2 + static_cast<std::size_t>(tp);
    if (l->tokens.size() != expected && l->tokens.size() != expected + 1) {
      throw ParseError(src, l->number, "element line has wrong number of fields");
    }
    std::vector<NodeId> corners;
    for (long i = 0; i < tp; ++i) {
      const long n = to_int(l->tokens[2 + i], src, l->number);
      if (n < 0 || n >= static_cast<long>(coords.size())) {
        throw TopologyError(src + ":" + std::to_string(l->number) + ": element references missing node " +
                            std::to_string(n));
      }
      corners.push_back(static_cast<NodeId>(n));
    }
    const int material = l->tokens.size() == expected + 1 ? static_cast<int>(to_int(l->tokens.back(), src, l->number)) : 0;
    if (material < 0) throw ParseError(src, l->number, "material id must be non-negative");
    try {
      mesh.add_element(static_cast<int>(tp), corners, material);
    } catch (const TopologyError& e) {
      throw TopologyError(src + ":" + std::to_string(l->number) + ": " + e.what());
    }
  }

  for (const Line& l : sections["BC"]) {
    if (l.tokens.size() != 4) throw ParseError(src, l.number, "BC line must be 'node dof value kind'");
    BoundaryCondition bc;
    const long n = to_int(l.tokens[0], src, l.number);
    if (n < 0 || n >= static_cast<long>(coords.size())) {
      throw TopologyError(src + ":" + std::to_string(l.number) + ": BC references missing node " + std::to_string(n));
    }
    bc.node = static_cast<NodeId>(n);
    const std::string& dof = l.tokens[1];
    if (dof == "0" || dof == "x") {
      bc.dof = 0;
    } else if (dof == "1" || dof == "y") {
      bc.dof = 1;
    } else {
      throw ParseError(src, l.number, "dof must be x|y|0|1");
    }
    bc.value = to_double(l.tokens[2], src, l.number);
    if (l.tokens[3] == "disp") {
      bc.kind = BcKind::disp;
    } else if (l.tokens[3] == "force") {
      bc.kind = BcKind::force;
    } else {
      throw ParseError(src, l.number, "BC kind must be disp or force");
    }
    mesh.add_bc(bc);
  }

  for (const Line& l : sections["BOUNDARY_CURVE"]) {
    if (l.tokens.size() < 5 || l.tokens[0] != "circle") {
      throw ParseError(src, l.number, "boundary curve must be 'circle cx cy r n1 n2 ...'");
    }
    BoundaryCircle c;
    c.cx = to_double(l.tokens[1], src, l.number);
    c.cy = to_double(l.tokens[2], src, l.number);
    c.r = to_double(l.tokens[3], src, l.number);
    if (!(c.r > 0.0)) throw ParseError(src, l.number, "circle radius must be positive");
    for (std::size_t i = 4; i < l.tokens.size(); ++i) {
      const long n = to_int(l.tokens[i], src, l.number);
      if (n < 0 || n >= static_cast<long>(coords.size())) {
        throw TopologyError(src + ":" + std::to_string(l.number) + ": curve references missing node " +
                            std::to_string(n));
      }
      c.nodes.push_back(static_cast<NodeId>(n));
    }
    mesh.add_boundary_circle(std::move(c));
  }

  for (const Line& l : sections["QUADRATIC"]) {
    if (l.tokens.empty() || l.tokens.size() > 2) throw ParseError(src, l.number, "QUADRATIC line must be 'element [center]'");
    const long e = to_int(l.tokens[0], src, l.number);
    if (e < 0 || e >= static_cast<long>(mesh.num_elements())) throw ParseError(src, l.number, "unknown element id");
    const bool center = l.tokens.size() == 2;
    if (center && l.tokens[1] != "center") throw ParseError(src, l.number, "expected 'center'");
    mesh.upgrade_element(static_cast<ElementId>(e), center);
  }

  mesh.validate();
  return mesh;
}

Mesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open mesh file");
  return parse_mesh(in, path.string());
}

void write_mesh(const Mesh& mesh, std::ostream& out) {
  for (const Node& n : mesh.nodes()) {
    if (n.kind != NodeKind::corner) throw Error("write_mesh: only linear (corner-node) meshes can be written");
  }
  using detail::shortest;
  out << "NODES\n";
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    out << i << ' ' << shortest(mesh.nodes()[i].x) << ' ' << shortest(mesh.nodes()[i].y) << '\n';
  }
  out << "ELEMENTS\n";
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const Element& el = mesh.elements()[e];
    out << e << ' ' << el.tp;
    for (int i = 0; i < el.tp; ++i) out << ' ' << el.corners[i];
    out << ' ' << el.material << '\n';
  }
  if (!mesh.bcs().empty()) {
    out << "BC\n";
    for (const BoundaryCondition& bc : mesh.bcs()) {
      out << bc.node << ' ' << (bc.dof == 0 ? 'x' : 'y') << ' ' << shortest(bc.value) << ' '
          << (bc.kind == BcKind::disp ? "disp" : "force") << '\n';
    }
  }
  if (!mesh.boundary_circles().empty()) {
    out << "BOUNDARY_CURVE\n";
    for (const BoundaryCircle& c : mesh.boundary_circles()) {
      out << "circle " << shortest(c.cx) << ' ' << shortest(c.cy) << ' ' << shortest(c.r);
      for (NodeId n : c.nodes) out << ' ' << n;
      out << '\n';
    }
  }
}

}  // namespace acem
