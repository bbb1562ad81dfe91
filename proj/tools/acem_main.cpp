// acem: run adaptive cracking-element simulations and generate benchmark meshes.
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "acem/app.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Adaptive cracking-element solver for quasi-brittle fracture"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<int> level;
  std::optional<int> max_steps;
  std::optional<std::string> out_dir;
  CLI::App* run = app.add_subcommand("run", "Run a simulation from a config file");
  run->add_option("config", config_path, "Config file")->required();
  run->add_option("--level", level, "Adaptive level override")->check(CLI::Range(0, 2));
  run->add_option("--max-steps", max_steps, "Stop after N load increments")->check(CLI::NonNegativeNumber);
  run->add_option("--out", out_dir, "Output directory override");

  std::string name;
  int refine = 0;
  std::string mesh_out;
  CLI::App* gen = app.add_subcommand("gen", "Write a benchmark mesh and a matching config");
  gen->add_option("name", name, "lpanel | disk | beam3pt")->required();
  gen->add_option("--refine", refine, "Refinement level")->check(CLI::NonNegativeNumber);
  gen->add_option("-o,--output", mesh_out, "Mesh file to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : acem::kExitConfig;
  }

  if (*run) {
    acem::RunOverrides ov;
    if (level) ov.level = static_cast<acem::AdaptiveLevel>(*level);
    ov.max_steps = max_steps;
    if (out_dir) ov.out_dir = *out_dir;
    return acem::cli_run(config_path, ov, std::cerr);
  }
  return acem::cli_gen(name, refine, mesh_out, std::cout);
}
