#include <benchmark/benchmark.h>

#include "tvg/simulator.hpp"

using namespace tvg;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) == 0 ? Execution::serial : Execution::parallel; }

void BM_SimulateSoa(benchmark::State& state) {
  const SimulationSetup s{ErParams{0.25}, UnderlyingGraph::line(10), 0, 9, 0, 20000, 1};
  for (auto _ : state) benchmark::DoNotOptimize(simulate_soa(s, {}, mode(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.trials));
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

void BM_SimulateCutMarkov(benchmark::State& state) {
  const SimulationSetup s{MarkovParams::stationary(0.5, 0.25), UnderlyingGraph::line(10), 0, 9, 0, 20000, 1};
  for (auto _ : state) benchmark::DoNotOptimize(simulate_cut(s, {}, mode(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.trials));
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

void BM_ReachablePairs(benchmark::State& state) {
  const auto k20 = UnderlyingGraph::complete(20);
  for (auto _ : state) benchmark::DoNotOptimize(empirical_reachable_pairs(ErParams{0.05}, k20, 40, 200, 1, mode(state)));
  state.SetItemsProcessed(state.iterations() * 200);
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

}  // namespace

BENCHMARK(BM_SimulateSoa)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateCutMarkov)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReachablePairs)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
