#include "acem/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>

#include "acem/error.hpp"

namespace acem {

namespace {

constexpr double kPi = std::numbers::pi;

/// Deduplicates nodes by rounded coordinates.
class NodePool {
 public:
  NodePool(Mesh& mesh, double scale) : mesh_(mesh), quantum_(scale * 1e-9) {}

  NodeId at(double x, double y) {
    const auto key = std::make_pair(std::llround(x / quantum_), std::llround(y / quantum_));
    const auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    const NodeId id = mesh_.add_node(x, y);
    ids_.emplace(key, id);
    return id;
  }

  std::optional<NodeId> find(double x, double y) const {
    const auto it = ids_.find({std::llround(x / quantum_), std::llround(y / quantum_)});
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

 private:
  Mesh& mesh_;
  double quantum_;
  std::map<std::pair<long long, long long>, NodeId> ids_;
};

/// Quad through four points (reordered counter-clockwise if needed).
ElementId add_quad(Mesh& mesh, NodePool& pool, const std::array<Vec2, 4>& pts) {
  std::array<NodeId, 4> q{};
  for (int i = 0; i < 4; ++i) q[i] = pool.at(pts[i].x(), pts[i].y());
  double area2 = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Node& p = mesh.node(q[i]);
    const Node& r = mesh.node(q[(i + 1) % 4]);
    area2 += p.x * r.y - r.x * p.y;
  }
  if (area2 < 0.0) std::reverse(q.begin(), q.end());
  return mesh.add_element(4, q);
}

/// Uniform grid over [a, b] with `n` divisions; the node nearest each pin is moved onto it.
std::vector<double> pinned_grid(double a, double b, int n, std::initializer_list<double> pins) {
  std::vector<double> g(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) g[i] = a + (b - a) * i / n;
  for (double p : pins) {
    auto best = std::min_element(g.begin() + 1, g.end() - 1,
                                 [p](double u, double v) { return std::abs(u - p) < std::abs(v - p); });
    *best = p;
  }
  return g;
}

void set_material_around(Mesh& mesh, NodeId node, int material, std::vector<int>& tags) {
  for (ElementId e : mesh.elements_at_node(node)) tags[e] = material;
}

Mesh retag(const Mesh& src, const std::vector<int>& tags) {
  Mesh out;
  for (const Node& n : src.nodes()) out.add_node(n.x, n.y);
  for (std::size_t e = 0; e < src.num_elements(); ++e) {
    const Element& el = src.elements()[e];
    out.add_element(el.tp, std::span<const NodeId>(el.corners.data(), static_cast<std::size_t>(el.tp)), tags[e]);
  }
  for (const auto& bc : src.bcs()) out.add_bc(bc);
  for (const auto& c : src.boundary_circles()) out.add_boundary_circle(c);
  return out;
}

void fix(Mesh& mesh, NodeId n, int dof, double value = 0.0) { mesh.add_bc({n, dof, value, BcKind::disp}); }

bool inside_convex(const std::vector<Vec2>& poly, const Vec2& p) {
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[(i + 1) % poly.size()];
    const double cross = (b.x() - a.x()) * (p.y() - a.y()) - (b.y() - a.y()) * (p.x() - a.x());
    if (cross < 0.0) return false;
  }
  return true;
}

}  // namespace

GeneratedBenchmark make_lpanel(int refine) {
  if (refine < 0) throw ConfigError("refinement must be non-negative");
  const double L = 0.25;
  const double load_x = 0.47;
  const int n = 10 * (refine + 1);
  GeneratedBenchmark out;
  Mesh mesh;
  NodePool pool(mesh, L);

  const std::vector<double> xl = pinned_grid(0.0, L, n, {});
  const std::vector<double> xr = pinned_grid(L, 2 * L, n, {load_x});
  const std::vector<double> y = pinned_grid(0.0, 2 * L, 2 * n, {});
  std::vector<double> xs = xl;
  xs.insert(xs.end(), xr.begin() + 1, xr.end());

  for (std::size_t j = 0; j + 1 < y.size(); ++j) {
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      if (xs[i] >= L - 1e-12 && y[j + 1] <= L + 1e-12) continue;
      add_quad(mesh, pool, {Vec2(xs[i], y[j]), Vec2(xs[i + 1], y[j]), Vec2(xs[i + 1], y[j + 1]), Vec2(xs[i], y[j + 1])});
    }
  }
  for (double x : xl) {
    const NodeId id = *pool.find(x, 0.0);
    fix(mesh, id, 0);
    fix(mesh, id, 1);
  }
  const NodeId load = *pool.find(load_x, L);
  fix(mesh, load, 1, 1.0);

  std::vector<int> tags(mesh.num_elements(), 0);
  set_material_around(mesh, load, 1, tags);
  out.mesh = retag(mesh, tags);

  RunConfig& cfg = out.config;
  const Material concrete{25.85e9, 0.18, 2.7e6, 65.0};
  Material pad = concrete;
  pad.ft = std::numeric_limits<double>::infinity();
  cfg.materials = {concrete, pad};
  cfg.schedule.assign(80, 10e-6);
  cfg.output_dir = "lpanel_out";
  return out;
}

GeneratedBenchmark make_disk(int refine, bool embedded_crack) {
  if (refine < 0) throw ConfigError("refinement must be non-negative");
  const double R = 0.05;
  const double s = 0.35 * R;
  const int n = 10 * (refine + 1);
  const int m = 6 * (refine + 1);
  GeneratedBenchmark out;
  Mesh mesh;
  NodePool pool(mesh, R);

  auto center_pt = [&](int i, int j) { return Vec2(-s + 2 * s * i / n, -s + 2 * s * j / n); };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      add_quad(mesh, pool, {center_pt(i, j), center_pt(i + 1, j), center_pt(i + 1, j + 1), center_pt(i, j + 1)});
    }
  }
  // Blocks between a side of the square and the matching quarter arc.
  struct Block {
    Vec2 p0, p1;
    double th0, th1;
  };
  const Block blocks[4] = {
      {{-s, -s}, {s, -s}, 1.25 * kPi, 1.75 * kPi},
      {{s, -s}, {s, s}, -0.25 * kPi, 0.25 * kPi},
      {{s, s}, {-s, s}, 0.25 * kPi, 0.75 * kPi},
      {{-s, s}, {-s, -s}, 0.75 * kPi, 1.25 * kPi},
  };
  BoundaryCircle circle;
  circle.r = R;
  for (const Block& b : blocks) {
    auto pt = [&](int i, int j) {
      const double u = static_cast<double>(i) / n;
      const double t = static_cast<double>(j) / m;
      const Vec2 inner = (1 - u) * b.p0 + u * b.p1;
      const double th = (1 - u) * b.th0 + u * b.th1;
      const Vec2 outer(R * std::cos(th), R * std::sin(th));
      return Vec2((1 - t) * inner + t * outer);
    };
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < n; ++i) add_quad(mesh, pool, {pt(i, j), pt(i + 1, j), pt(i + 1, j + 1), pt(i, j + 1)});
    }
    for (int i = 0; i <= n; ++i) circle.nodes.push_back(pool.at(pt(i, m).x(), pt(i, m).y()));
  }
  std::sort(circle.nodes.begin(), circle.nodes.end());
  circle.nodes.erase(std::unique(circle.nodes.begin(), circle.nodes.end()), circle.nodes.end());
  mesh.add_boundary_circle(circle);

  const NodeId top = *pool.find(0.0, R);
  const NodeId bottom = *pool.find(0.0, -R);
  fix(mesh, top, 0);
  fix(mesh, top, 1, -1.0);
  fix(mesh, bottom, 0);
  fix(mesh, bottom, 1);

  std::vector<int> tags(mesh.num_elements(), 0);
  set_material_around(mesh, top, 1, tags);
  set_material_around(mesh, bottom, 1, tags);
  out.mesh = retag(mesh, tags);

  RunConfig& cfg = out.config;
  const Material rock{20e9, 0.2, 3.81e6, 100.0};
  Material pad = rock;
  pad.ft = std::numeric_limits<double>::infinity();
  cfg.materials = {rock, pad};
  cfg.schedule.assign(embedded_crack ? 28 : 47, 3e-6);
  cfg.output_dir = embedded_crack ? "disk_out" : "disk_intact_out";

  if (embedded_crack) {
    const double angle_deg = 60.0;
    const double a = 0.3 * R;
    const Vec2 dir(std::cos(angle_deg * kPi / 180.0), std::sin(angle_deg * kPi / 180.0));
    const double opening = rock.zeta0() + 20.0 * (rock.Gf - rock.Gf0()) / rock.ft;
    std::vector<char> hit(out.mesh.num_elements(), 0);
    const int samples = 400;
    for (int k = 0; k <= samples; ++k) {
      const Vec2 p = (-a + 2 * a * k / samples) * dir;
      for (std::size_t e = 0; e < out.mesh.num_elements(); ++e) {
        if (!hit[e] && inside_convex(out.mesh.corner_coords(static_cast<ElementId>(e)), p)) hit[e] = 1;
      }
    }
    for (std::size_t e = 0; e < hit.size(); ++e) {
      if (hit[e]) cfg.embedded_cracks.push_back({static_cast<ElementId>(e), angle_deg, opening});
    }
  }
  return out;
}

GeneratedBenchmark make_beam3pt(int refine, int beam_case) {
  if (refine < 0) throw ConfigError("refinement must be non-negative");
  if (beam_case != 1 && beam_case != 2) throw ConfigError("beam case must be 1 or 2");
  const double L = 0.5, H = 0.1, span = 0.45;
  const int nx = 50 * (refine + 1);
  const int ny = 10 * (refine + 1);
  const double xa = 0.5 * (L - span), xb = 0.5 * (L + span);
  GeneratedBenchmark out;
  Mesh mesh;
  NodePool pool(mesh, L);
  const std::vector<double> x = pinned_grid(0.0, L, nx, {xa, xb, 0.5 * L});
  const std::vector<double> y = pinned_grid(0.0, H, ny, {});
  for (std::size_t j = 0; j + 1 < y.size(); ++j) {
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      add_quad(mesh, pool, {Vec2(x[i], y[j]), Vec2(x[i + 1], y[j]), Vec2(x[i + 1], y[j + 1]), Vec2(x[i], y[j + 1])});
    }
  }
  const NodeId left = *pool.find(xa, 0.0);
  const NodeId right = *pool.find(xb, 0.0);
  const NodeId load = *pool.find(0.5 * L, H);
  fix(mesh, left, 0);
  fix(mesh, left, 1);
  fix(mesh, right, 1);
  fix(mesh, load, 1, -1.0);

  // Aggregates: non-overlapping circles in the middle zone, fixed seed.
  struct Circle {
    double x, y, r;
  };
  std::vector<Circle> aggregates;
  std::mt19937 gen(20230417u);
  auto uniform = [&gen](double lo, double hi) { return lo + (hi - lo) * (gen() / 4294967296.0); };
  const double zx0 = 0.5 * L - 0.075, zx1 = 0.5 * L + 0.075;
  for (int attempt = 0; attempt < 4000 && aggregates.size() < 40; ++attempt) {
    const double r = uniform(0.006, 0.012);
    const Circle c{uniform(zx0 + r, zx1 - r), uniform(r + 0.004, H - r - 0.004), r};
    const bool clear = std::none_of(aggregates.begin(), aggregates.end(), [&](const Circle& o) {
      return std::hypot(o.x - c.x, o.y - c.y) < o.r + c.r + 0.003;
    });
    if (clear) aggregates.push_back(c);
  }
  std::vector<int> tags(mesh.num_elements(), 0);
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const Vec2 p = mesh.centroid(static_cast<ElementId>(e));
    for (const Circle& c : aggregates) {
      if (std::hypot(p.x() - c.x, p.y() - c.y) < c.r) tags[e] = 1;
    }
  }
  for (NodeId n : {left, right, load}) set_material_around(mesh, n, 2, tags);
  out.mesh = retag(mesh, tags);

  RunConfig& cfg = out.config;
  const Material paste{20e9, 0.2, 2.4e6, 113.0};
  const Material aggregate = beam_case == 2 ? Material{30e9, 0.2, 6e6, 200.0} : paste;
  Material pad = paste;
  pad.ft = std::numeric_limits<double>::infinity();
  cfg.materials = {paste, aggregate, pad};
  cfg.schedule.assign(100, 5e-6);
  cfg.output_dir = "beam3pt_out";
  return out;
}

GeneratedBenchmark generate_benchmark(const std::string& name, const GenOptions& options) {
  if (name == "lpanel") return make_lpanel(options.refine);
  if (name == "disk") return make_disk(options.refine, options.disk_crack);
  if (name == "beam3pt") return make_beam3pt(options.refine, options.beam_case);
  throw ConfigError("unknown benchmark '" + name + "' (expected lpanel, disk or beam3pt)");
}

std::filesystem::path write_benchmark(GeneratedBenchmark bench, const std::filesystem::path& mesh_path) {
  if (mesh_path.has_parent_path()) std::filesystem::create_directories(mesh_path.parent_path());
  {
    std::ofstream m(mesh_path);
    if (!m) throw Error("cannot write '" + mesh_path.string() + "'");
    write_mesh(bench.mesh, m);
  }
  std::filesystem::path cfg_path = mesh_path;
  cfg_path.replace_extension(".cfg");
  bench.config.mesh = mesh_path.filename();
  std::ofstream c(cfg_path);
  if (!c) throw Error("cannot write '" + cfg_path.string() + "'");
  write_config(bench.config, c);
  return cfg_path;
}

}  // namespace acem
