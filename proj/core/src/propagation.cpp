#include "acem/propagation.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "acem/error.hpp"

namespace acem {

namespace {

// Radius of the strain Mohr circle: sqrt(((ex - ey) / 2)^2 + (gxy / 2)^2).
double mohr_radius(const Voigt& e) { return 0.5 * std::hypot(e(0) - e(1), e(2)); }

bool is_isotropic(const Voigt& e) {
  const double r = mohr_radius(e);
  const double scale = std::abs(e(0)) + std::abs(e(1)) + std::abs(e(2));
  return r <= 1e-12 * scale || scale == 0.0;
}

}  // namespace

PrincipalDirection crack_normal(const Voigt& eps, ShearConvention /*convention*/) {
  // (ex + ey + sqrt((ex - ey)^2 + gxy^2)) / 2 is algebraically the tensor
  // eigenvalue with e_xy = gxy / 2, so both conventions share this path.
  PrincipalDirection out;
  out.eps1 = 0.5 * (eps(0) + eps(1)) + mohr_radius(eps);
  if (is_isotropic(eps)) {
    out.n = Vec2(1.0, 0.0);
    return out;
  }
  const double theta = 0.5 * std::atan2(eps(2), eps(0) - eps(1));
  Vec2 n(std::cos(theta), std::sin(theta));
  if (n.y() < 0.0 || (n.y() == 0.0 && n.x() < 0.0)) n = -n;
  out.n = n;
  return out;
}

double cracking_indicator(const Voigt& eps, const Material& mat, ShearConvention convention) {
  if (!mat.can_crack()) return -std::numeric_limits<double>::infinity();
  const Vec2 n = crack_normal(eps, convention).n;
  const Voigt sigma = plane_stress_C(mat) * eps;
  return n.x() * n.x() * sigma(0) + n.y() * n.y() * sigma(1) + 2.0 * n.x() * n.y() * sigma(2) - mat.ft;
}

double cracking_indicator(const Model& model, ElementId e) {
  const Material& mat = model.material_of(e);
  if (!mat.can_crack()) return -std::numeric_limits<double>::infinity();
  return cracking_indicator(model.strain_hat(e), mat, model.options().shear_convention);
}

RegionPartition partition_regions(const Model& model) {
  const Mesh& mesh = model.mesh();
  const std::size_t ne = mesh.num_elements();
  std::vector<char> in_prop(ne, 0);
  RegionPartition p;
  for (std::size_t e = 0; e < ne; ++e) {
    if (!model.state(static_cast<ElementId>(e)).cracked()) continue;
    p.cracked.push_back(static_cast<ElementId>(e));
    for (ElementId nb : mesh.neighbors(static_cast<ElementId>(e), NeighborMode::shares_edge)) {
      if (!model.state(nb).cracked()) in_prop[nb] = 1;
    }
  }
  for (std::size_t e = 0; e < ne; ++e) {
    if (model.state(static_cast<ElementId>(e)).cracked()) continue;
    (in_prop[e] ? p.propagation : p.root_search).push_back(static_cast<ElementId>(e));
  }
  return p;
}

std::vector<NodeId> enrich_for_level(Model& model, ElementId e, AdaptiveLevel level) {
  std::vector<NodeId> created = model.upgrade(e, true);
  if (level == AdaptiveLevel::level0) return created;
  const NeighborMode mode = level == AdaptiveLevel::level1 ? NeighborMode::shares_edge : NeighborMode::shares_node;
  for (ElementId nb : model.mesh().neighbors(e, mode)) {
    const std::vector<NodeId> more = model.upgrade(nb, false);
    created.insert(created.end(), more.begin(), more.end());
  }
  return created;
}

void crack_element(Model& model, ElementId e) {
  if (model.state(e).cracked()) return;
  const Vec2 n = crack_normal(model.strain_hat(e), model.options().shear_convention).n;
  enrich_for_level(model, e, model.options().level);
  CrackState crack;
  crack.geom = make_crack_geometry(model.mesh().corner_coords(e), n);
  model.state(e).crack = crack;
}

void embed_crack(Model& model, const EmbeddedCrack& spec) {
  if (spec.element < 0 || static_cast<std::size_t>(spec.element) >= model.mesh().num_elements()) {
    throw ConfigError("embedded crack references unknown element " + std::to_string(spec.element));
  }
  const Material& mat = model.material_of(spec.element);
  if (!mat.can_crack()) throw ConfigError("embedded crack in a material that cannot crack");
  if (!(spec.opening > mat.zeta0())) {
    throw ConfigError("embedded crack opening must exceed zeta_0 of its material");
  }
  const double a = spec.angle_deg * std::numbers::pi / 180.0;
  Vec2 n(-std::sin(a), std::cos(a));
  if (n.y() < 0.0 || (n.y() == 0.0 && n.x() < 0.0)) n = -n;
  if (!model.state(spec.element).cracked()) enrich_for_level(model, spec.element, model.options().level);
  CrackState crack;
  crack.geom = make_crack_geometry(model.mesh().corner_coords(spec.element), n);
  crack.hist = update_history(CrackHistory{}, spec.opening, mat);
  crack.frozen = true;
  model.state(spec.element).crack = crack;
}

std::optional<ElementId> next_cracking_element(const Model& model) {
  const RegionPartition p = partition_regions(model);
  for (const auto* region : {&p.propagation, &p.root_search}) {
    std::optional<ElementId> best;
    double best_phi = 0.0;
    for (ElementId e : *region) {
      const double phi = cracking_indicator(model, e);
      // Differences below this count as ties so that round-off cannot reorder them.
      const double tie = 1e-10 * model.material_of(e).ft;
      if (phi > (best ? best_phi + tie : tie)) {
        best_phi = phi;
        best = e;
      }
    }
    if (best) return best;
  }
  return std::nullopt;
}

std::vector<ElementId> search_step(Model& model, const std::function<void(Model&)>& reequilibrate) {
  std::vector<ElementId> cracked;
  while (const auto e = next_cracking_element(model)) {
    crack_element(model, *e);
    cracked.push_back(*e);
    reequilibrate(model);
  }
  return cracked;
}

void update_crack_geometry(Model& model) {
  const Mesh& mesh = model.mesh();
  for (std::size_t i = 0; i < mesh.num_elements(); ++i) {
    const auto e = static_cast<ElementId>(i);
    ElementState& st = model.state(e);
    if (!st.cracked() || st.crack->frozen) continue;
    const Voigt eps = model.strain_hat(e);
    if (is_isotropic(eps)) continue;
    Vec2 n = crack_normal(eps, model.options().shear_convention).n;
    if (n.dot(st.crack->geom.n) < 0.0) n = -n;
    st.crack->geom = make_crack_geometry(mesh.corner_coords(e), n);
  }
}

void update_crack_histories(Model& model) {
  const Mesh& mesh = model.mesh();
  for (std::size_t i = 0; i < mesh.num_elements(); ++i) {
    const auto e = static_cast<ElementId>(i);
    ElementState& st = model.state(e);
    if (!st.cracked()) continue;
    const Eigen::Vector2d z = model.zeta(e);
    st.crack->hist = update_history(st.crack->hist, zeta_eq(z.x(), z.y()), model.material_of(e));
    if (model.options().freeze_normal && st.crack->hist.recorded()) st.crack->frozen = true;
  }
}

}  // namespace acem
