#include "acem/output.hpp"

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "acem/error.hpp"

namespace acem {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_vtk(const Model& model, std::ostream& out, const std::string& title) {
  const Mesh& mesh = model.mesh();
  const Eigen::VectorXd& U = model.U();

  std::vector<int> point_of(mesh.num_nodes(), -1);
  std::vector<NodeId> points;
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    if (mesh.nodes()[i].kind == NodeKind::center) continue;
    point_of[i] = static_cast<int>(points.size());
    points.push_back(static_cast<NodeId>(i));
  }

  out.precision(12);
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << points.size() << " double\n";
  for (NodeId n : points) out << mesh.node(n).x << " " << mesh.node(n).y << " 0\n";

  std::vector<std::vector<int>> cells;
  std::vector<int> types;
  for (const Element& el : mesh.elements()) {
    std::vector<int> c;
    for (int i = 0; i < el.tp; ++i) c.push_back(point_of[el.corners[i]]);
    const bool full = el.edge_node_count() == el.tp;
    if (full) {
      for (int i = 0; i < el.tp; ++i) c.push_back(point_of[el.econn[i]]);
      types.push_back(el.tp == 4 ? 23 : 22);
    } else {
      types.push_back(el.tp == 4 ? 9 : 5);
    }
    cells.push_back(std::move(c));
  }
  std::size_t size = 0;
  for (const auto& c : cells) size += c.size() + 1;
  out << "CELLS " << cells.size() << " " << size << "\n";
  for (const auto& c : cells) {
    out << c.size();
    for (int p : c) out << " " << p;
    out << "\n";
  }
  out << "CELL_TYPES " << types.size() << "\n";
  for (int t : types) out << t << "\n";

  out << "POINT_DATA " << points.size() << "\nVECTORS displacement double\n";
  for (NodeId n : points) out << U(2 * n) << " " << U(2 * n + 1) << " 0\n";

  const std::size_t ne = mesh.num_elements();
  out << "CELL_DATA " << ne << "\nSCALARS cracked int 1\nLOOKUP_TABLE default\n";
  for (std::size_t e = 0; e < ne; ++e) out << (model.states()[e].cracked() ? 1 : 0) << "\n";
  out << "SCALARS material int 1\nLOOKUP_TABLE default\n";
  for (const Element& el : mesh.elements()) out << el.material << "\n";
  out << "SCALARS enrichment_mask int 1\nLOOKUP_TABLE default\n";
  for (const Element& el : mesh.elements()) out << el.enrichment_mask() << "\n";
  out << "VECTORS normal double\n";
  for (std::size_t e = 0; e < ne; ++e) {
    const auto& st = model.states()[e];
    if (st.cracked()) {
      out << st.crack->geom.n.x() << " " << st.crack->geom.n.y() << " 0\n";
    } else {
      out << "0 0 0\n";
    }
  }
  std::vector<Eigen::Vector2d> z(ne);
  for (std::size_t e = 0; e < ne; ++e) z[e] = model.zeta(static_cast<ElementId>(e));
  out << "SCALARS zeta_n double 1\nLOOKUP_TABLE default\n";
  for (const auto& v : z) out << v.x() << "\n";
  out << "SCALARS zeta_t double 1\nLOOKUP_TABLE default\n";
  for (const auto& v : z) out << v.y() << "\n";
  out << "SCALARS zeta_eq double 1\nLOOKUP_TABLE default\n";
  for (const auto& v : z) out << zeta_eq(v.x(), v.y()) << "\n";
  out << "SCALARS crack_opening double 1\nLOOKUP_TABLE default\n";
  for (std::size_t e = 0; e < ne; ++e) {
    const auto& st = model.states()[e];
    out << (st.cracked() ? std::max(st.crack->hist.zeta_mx, zeta_eq(z[e].x(), z[e].y())) : 0.0) << "\n";
  }
}

void write_vtk_file(const Model& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  write_vtk(model, out);
}

RunWriter::RunWriter(std::filesystem::path dir, int vtk_every) : dir_(std::move(dir)), vtk_every_(vtk_every) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error("cannot create output directory '" + dir_.string() + "': " + ec.message());
  fd_.open(dir_ / "force_displacement.csv", std::ios::trunc);
  stats_.open(dir_ / "stats.csv", std::ios::trunc);
  if (!fd_ || !stats_) throw Error("cannot write CSV files in '" + dir_.string() + "'");
  fd_ << "d,F\n";
  stats_ << "step,newton_iterations,node_count,elapsed_s\n";
}

namespace {

std::filesystem::path vtk_name(const std::filesystem::path& dir, int step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "step_%05d.vtk", step);
  return dir / buf;
}

}  // namespace

void RunWriter::start(const Model& model) {
  fd_ << fmt17(model.load()) << "," << fmt17(reaction_force(model)) << "\n" << std::flush;
  if (vtk_every_ > 0) write_vtk_file(model, vtk_name(dir_, 0));
}

void RunWriter::record(const Model& model, const StepRecord& rec) {
  fd_ << fmt17(rec.d) << "," << fmt17(rec.force) << "\n" << std::flush;
  stats_ << rec.step << "," << rec.iterations << "," << rec.nodes << "," << fmt17(rec.elapsed_s) << "\n"
         << std::flush;
  if (vtk_every_ > 0 && rec.step % vtk_every_ == 0) write_vtk_file(model, vtk_name(dir_, rec.step));
}

}  // namespace acem
