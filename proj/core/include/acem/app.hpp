/**
 * @file app.hpp
 * @brief Command-level entry points shared by the CLI and the tests.
 */
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "acem/config.hpp"
#include "acem/solver.hpp"

namespace acem {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitSolver = 3 };

struct RunOverrides {
  std::optional<AdaptiveLevel> level;
  std::optional<int> max_steps;  ///< truncates the schedule
  std::optional<std::filesystem::path> out_dir;
};

struct RunResult {
  std::vector<StepRecord> steps;
  std::filesystem::path out_dir;
};

/// Builds the model from `cfg` (mesh, materials, embedded cracks), runs the
/// loading schedule and writes CSV/VTK output. Throws on any error.
RunResult run_simulation(RunConfig cfg, const RunOverrides& overrides = {});

/// `run <config>`: returns kExitOk, kExitConfig (bad config or mesh) or
/// kExitSolver, printing diagnostics to `err`.
int cli_run(const std::filesystem::path& config_path, const RunOverrides& overrides, std::ostream& err);

/// `gen <name> --refine k -o path`.
int cli_gen(const std::string& name, int refine, const std::filesystem::path& mesh_path, std::ostream& log);

}  // namespace acem
