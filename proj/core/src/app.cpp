#include "acem/app.hpp"

#include <ostream>

#include "acem/benchmarks.hpp"
#include "acem/error.hpp"
#include "acem/output.hpp"
#include "acem/propagation.hpp"

namespace acem {

RunResult run_simulation(RunConfig cfg, const RunOverrides& overrides) {
  if (overrides.level) cfg.model.level = *overrides.level;
  if (overrides.out_dir) cfg.output_dir = *overrides.out_dir;
  if (overrides.max_steps && static_cast<std::size_t>(*overrides.max_steps) < cfg.schedule.size()) {
    cfg.schedule.resize(static_cast<std::size_t>(std::max(0, *overrides.max_steps)));
  }

  Mesh mesh = load_mesh(cfg.mesh);
  mesh.validate();
  Model model(std::move(mesh), cfg.materials, cfg.model);
  for (const EmbeddedCrack& c : cfg.embedded_cracks) embed_crack(model, c);

  RunWriter writer(cfg.output_dir, cfg.vtk_every);
  writer.start(model);
  RunResult result;
  result.out_dir = cfg.output_dir;
  result.steps = run_loading(model, cfg.schedule, cfg.solver,
                             [&writer](const Model& m, const StepRecord& rec) { writer.record(m, rec); });
  return result;
}

int cli_run(const std::filesystem::path& config_path, const RunOverrides& overrides, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const Error& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  try {
    run_simulation(std::move(cfg), overrides);
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const ParseError& e) {
    err << "mesh error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const TopologyError& e) {
    err << "mesh error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitOk;
}

int cli_gen(const std::string& name, int refine, const std::filesystem::path& mesh_path, std::ostream& log) {
  try {
    GenOptions opt;
    opt.refine = refine;
    const auto cfg = write_benchmark(generate_benchmark(name, opt), mesh_path);
    log << "wrote " << mesh_path.string() << " and " << cfg.string() << "\n";
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}

}  // namespace acem
