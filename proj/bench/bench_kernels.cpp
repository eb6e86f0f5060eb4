// Serial vs OpenMP kernels.

#include <benchmark/benchmark.h>

#include "decx/dec.hpp"
#include "decx/environments.hpp"
#include "decx/exo.hpp"
#include "decx/harness.hpp"
#include "decx/info_ratio.hpp"

using namespace decx;

namespace {

const ModelClass& hull_class() {
  static const ModelClass cls = hull_grid(build_mdp_hard(MdpShape{3, 2, 2, 2}, 0.3).cls, 4);
  return cls;
}

const ModelClass& bandit3() {
  static const ModelClass cls = build_bandit_hard(3, 0.1).cls;
  return cls;
}

template <bool Parallel>
void BM_DecSup(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(Parallel ? dec_value_sup(hull_class(), 1.0) : dec_value_sup_serial(hull_class(), 1.0));
}

template <bool Parallel>
void BM_IrSearch(benchmark::State& st) {
  IrBudget b;
  b.exhaustive_cells = 0;
  b.restarts = 8;
  b.iterations = 100;
  for (auto _ : st)
    benchmark::DoNotOptimize(Parallel ? ir_search(bandit3(), 1.0, b) : ir_search_serial(bandit3(), 1.0, b));
}

template <bool Parallel>
void BM_ExoSupQ(benchmark::State& st) {
  SupQBudget b;
  b.resolution = 4;
  b.refine_rounds = 1;
  for (auto _ : st)
    benchmark::DoNotOptimize(Parallel ? exo_sup_q(bandit3(), 1.0, b) : exo_sup_q_serial(bandit3(), 1.0, b));
}

template <bool Parallel>
void BM_Simulation(benchmark::State& st) {
  const ModelClass& cls = bandit3();
  const Adversary adv = Adversary::stochastic_mixture(std::vector<double>(cls.size(), 1.0 / cls.size()));
  SimulationConfig cfg;
  cfg.horizon = 50;
  cfg.seeds = 8;
  for (auto _ : st)
    benchmark::DoNotOptimize(Parallel ? run_simulation(cls, adv, cfg) : run_simulation_serial(cls, adv, cfg));
}

}  // namespace

BENCHMARK(BM_DecSup<false>)->Name("dec_value_sup/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DecSup<true>)->Name("dec_value_sup/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IrSearch<false>)->Name("ir_search/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IrSearch<true>)->Name("ir_search/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExoSupQ<false>)->Name("exo_sup_q/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExoSupQ<true>)->Name("exo_sup_q/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Simulation<false>)->Name("run_simulation/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Simulation<true>)->Name("run_simulation/omp")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
