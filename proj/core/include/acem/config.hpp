/**
 * @file config.hpp
 * @brief Run configuration: flat `key = value` text grouped in [sections].
 *
 * @code
 * [model]
 * mesh = lpanel.mesh
 * [material.0]
 * E = 25.85e9
 * nu = 0.18
 * ft = 2.7e6
 * Gf = 65
 * [loading]
 * delta_d = 1e-5
 * steps = 80
 * [adaptive]
 * adaptive_level = 0
 * [embedded_cracks]
 * crack = 12 60 1e-3
 * @endcode
 */
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "acem/model.hpp"
#include "acem/solver.hpp"

namespace acem {

struct RunConfig {
  std::filesystem::path mesh;
  std::vector<Material> materials;
  /// Load increments in order; built from delta_d/steps or from `schedule`.
  std::vector<double> schedule;
  ModelOptions model;
  SolverOptions solver;
  std::vector<EmbeddedCrack> embedded_cracks;
  std::filesystem::path output_dir = "out";
  int vtk_every = 1;  ///< 0 disables VTK output
};

/// Parses config text. Relative mesh and output paths are resolved against
/// `base_dir`. Throws ConfigError carrying the offending line number.
RunConfig parse_config(std::istream& in, const std::string& source_name = "<config>",
                       const std::filesystem::path& base_dir = {});

/// Reads and parses a config file and checks that the mesh file exists.
RunConfig load_config(const std::filesystem::path& path);

/// Writes `cfg` back in the parseable format. The schedule is run-length encoded.
void write_config(const RunConfig& cfg, std::ostream& out);

}  // namespace acem
