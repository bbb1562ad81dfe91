/**
 * @file output.hpp
 * @brief Legacy ASCII VTK snapshots and per-step CSV histories.
 */
#pragma once

#include <filesystem>
#include <fstream>
#include <iosfwd>

#include "acem/model.hpp"
#include "acem/solver.hpp"

namespace acem {

/// Unstructured grid of the current state. Fully upgraded elements are written
/// as VTK quadratic cells (23 / 22); all others use their corner footprint
/// (9 / 5) and report the occupied edge slots in `enrichment_mask`. Center
/// nodes are not written as points; their openings appear as cell data.
void write_vtk(const Model& model, std::ostream& out, const std::string& title = "acem");
void write_vtk_file(const Model& model, const std::filesystem::path& path);

/// Owns the output directory of one run: `force_displacement.csv`,
/// `stats.csv` and `step_NNNNN.vtk` every `vtk_every` steps.
class RunWriter {
 public:
  RunWriter(std::filesystem::path dir, int vtk_every);

  /// Writes the undeformed state (step 0).
  void start(const Model& model);
  void record(const Model& model, const StepRecord& rec);

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  int vtk_every_;
  std::ofstream fd_;
  std::ofstream stats_;
};

}  // namespace acem
