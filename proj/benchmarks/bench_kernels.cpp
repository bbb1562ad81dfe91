#include <benchmark/benchmark.h>

#include <vector>

#include "acem/benchmarks.hpp"
#include "acem/cracking_element.hpp"
#include "acem/propagation.hpp"
#include "acem/solver.hpp"

namespace {

acem::ElementInput q8_input() {
  acem::ElementInput in;
  in.tp = 4;
  in.coords = {{0, 0}, {1.1, 0.1}, {1.0, 0.9}, {-0.1, 1.0}};
  for (int i = 0; i < 4; ++i) in.coords.push_back(0.5 * (in.coords[i] + in.coords[(i + 1) % 4]));
  in.econn = {10, 11, acem::kNoNode, 13};
  return in;
}

const acem::Material kConcrete{25.85e9, 0.18, 2.7e6, 65.0};

void BM_ShapeEvalFolded(benchmark::State& state) {
  const acem::ElementInput in = q8_input();
  for (auto _ : state) {
    for (const auto& q : acem::quadrature(4).points) {
      benchmark::DoNotOptimize(acem::eval_folded(4, q.xi, q.eta, in.coords, in.econn));
    }
  }
}
BENCHMARK(BM_ShapeEvalFolded);

void BM_AssembleUncracked(benchmark::State& state) {
  const acem::ElementInput in = q8_input();
  const Eigen::VectorXd Ue = Eigen::VectorXd::Zero(16);
  for (auto _ : state) benchmark::DoNotOptimize(acem::assemble_uncracked(in, kConcrete, Ue));
}
BENCHMARK(BM_AssembleUncracked);

void BM_AssembleCracked(benchmark::State& state) {
  const acem::ElementInput in = q8_input();
  acem::CrackState cs;
  cs.geom = acem::make_crack_geometry(in.corners(), acem::Vec2(0.6, 0.8));
  const Eigen::VectorXd Ue = 1e-5 * Eigen::VectorXd::LinSpaced(16, -1, 1);
  const Eigen::Vector2d zeta(3 * kConcrete.zeta0(), 0.0);
  const auto matrix = static_cast<acem::IterationMatrix>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(acem::assemble_cracked(in, kConcrete, cs, Ue, zeta, matrix, 1e-6));
  }
}
BENCHMARK(BM_AssembleCracked)->Arg(0)->Arg(1);

void BM_GlobalElasticSolve(benchmark::State& state) {
  acem::GeneratedBenchmark bench = acem::make_lpanel(static_cast<int>(state.range(0)));
  const acem::Model model(bench.mesh, bench.config.materials);
  for (auto _ : state) {
    acem::Model m = model;
    benchmark::DoNotOptimize(acem::newton_solve(m, 1e-5, acem::SolverOptions{}));
  }
  state.counters["dofs"] = static_cast<double>(model.num_dofs());
}
BENCHMARK(BM_GlobalElasticSolve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
