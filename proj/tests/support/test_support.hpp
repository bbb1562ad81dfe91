#pragma once

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "acem/mesh.hpp"
#include "acem/model.hpp"

namespace acem::testing {

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "acem_tests" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// nx x ny structured quads on [0, w] x [0, h]; node (i, j) has id j * (nx + 1) + i.
inline Mesh quad_grid(int nx, int ny, double w = 1.0, double h = 1.0) {
  Mesh mesh;
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) mesh.add_node(w * i / nx, h * j / ny);
  }
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const NodeId a = j * (nx + 1) + i;
      const std::vector<NodeId> c{a, a + 1, a + nx + 2, a + nx + 1};
      mesh.add_element(4, c);
    }
  }
  return mesh;
}

inline Material concrete() { return {25.85e9, 0.18, 2.7e6, 65.0}; }

/// Exponential softening written out independently of the library.
inline double reference_traction(double zeta, const Material& m) {
  const double gf0 = 0.01 * m.Gf;
  const double z0 = 2.0 * gf0 / m.ft;
  if (zeta <= z0) return m.ft * zeta / z0;
  return m.ft * std::exp(-m.ft * (zeta - z0) / (m.Gf - gf0));
}

/// Square element of side h (unit thickness) clamped at the bottom and pulled
/// at the top; one Q8 element once upgraded.
inline Mesh mode_one_element(double h, bool quadratic) {
  Mesh mesh;
  mesh.add_node(0, 0);
  mesh.add_node(h, 0);
  mesh.add_node(h, h);
  mesh.add_node(0, h);
  const std::vector<NodeId> c{0, 1, 2, 3};
  mesh.add_element(4, c);
  mesh.add_bc({0, 0, 0.0, BcKind::disp});
  mesh.add_bc({0, 1, 0.0, BcKind::disp});
  mesh.add_bc({1, 1, 0.0, BcKind::disp});
  mesh.add_bc({2, 1, 1.0, BcKind::disp});
  mesh.add_bc({3, 1, 1.0, BcKind::disp});
  if (quadratic) mesh.upgrade_element(0, false);
  return mesh;
}

}  // namespace acem::testing
