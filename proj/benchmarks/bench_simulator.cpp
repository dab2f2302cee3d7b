#include <benchmark/benchmark.h>

#include "ncg/simulator.hpp"

namespace {

void BM_Step(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    ncg::graph_state g({N, 0.5, 0.5, 0.5}, 1);
    g.run(10000, {});  // grow past the tiny-graph regime
    for (auto _ : state) {
        benchmark::DoNotOptimize(g.step());
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Step)->Arg(3)->Arg(4)->Arg(6);

void BM_Snapshot(benchmark::State& state) {
    ncg::graph_state g({4, 0.5, 0.5, 0.5}, 1);
    g.run(static_cast<std::uint64_t>(state.range(0)), {});
    for (auto _ : state) {
        benchmark::DoNotOptimize(g.make_snapshot());
    }
}
BENCHMARK(BM_Snapshot)->Arg(10000)->Arg(100000);

void BM_WeightedSample(benchmark::State& state) {
    ncg::graph_state g({4, 0.5, 0.5, 0.5}, 1);
    g.run(100000, {});
    ncg::rng_engine rng(7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(g.n1cliques().sample_weighted(rng));
    }
}
BENCHMARK(BM_WeightedSample);

}  // namespace

BENCHMARK_MAIN();
