/**
 * @file benchmarks.hpp
 * @brief Generators for the L-shaped panel, the Brazilian disk with an
 *        inclined initial crack and the three-point bending beam.
 *
 * Dimensions and material values of these set-ups are only available as
 * figures in the literature; the defaults below were read off those figures
 * and every value can be overridden through the generated config.
 */
#pragma once

#include <filesystem>
#include <string>

#include "acem/config.hpp"
#include "acem/mesh.hpp"

namespace acem {

struct GeneratedBenchmark {
  Mesh mesh;
  RunConfig config;  ///< mesh path left empty; set by write_benchmark
};

struct GenOptions {
  int refine = 0;
  bool disk_crack = true;  ///< disk only: embed the inclined crack
  int beam_case = 2;       ///< beam only: 1 = aggregates as paste, 2 = stiff aggregates
};

/// 500 x 500 mm panel with the lower-right 250 x 250 quadrant removed; the
/// bottom of the leg is clamped and the arm is pushed up at x = 470 mm.
/// Refinement k uses 10 (k + 1) elements per 250 mm.
GeneratedBenchmark make_lpanel(int refine);

/// Disk of diameter 0.1 m on an O-grid with corner nodes on the circle,
/// compressed between its top and bottom points. The initial crack has
/// half-length 0.3 R, passes through the center and is inclined 30 degrees
/// from the loading axis.
GeneratedBenchmark make_disk(int refine, bool embedded_crack = true);

/// 500 x 100 mm beam on supports 450 mm apart, loaded at mid-span. The middle
/// 150 mm holds circular aggregates (material 1).
GeneratedBenchmark make_beam3pt(int refine, int beam_case = 2);

/// Dispatches on `lpanel`, `disk`, `beam3pt`. Throws ConfigError on unknown names.
GeneratedBenchmark generate_benchmark(const std::string& name, const GenOptions& options);

/// Writes the mesh to `mesh_path` and a ready-to-run config next to it
/// (same stem, `.cfg`). Returns the config path.
std::filesystem::path write_benchmark(GeneratedBenchmark bench, const std::filesystem::path& mesh_path);

}  // namespace acem
