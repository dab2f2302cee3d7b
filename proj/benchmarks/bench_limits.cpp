#include <benchmark/benchmark.h>

#include "ncg/limits.hpp"

namespace {

const ncg::derived_constants kConstants = ncg::derive_constants({4, 0.5, 0.5, 0.5});

void BM_XdwTable(benchmark::State& state) {
    const int W = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ncg::xdw_table(kConstants, 4, W));
    }
}
BENCHMARK(BM_XdwTable)->Arg(500)->Arg(2000);

void BM_XwClosedForm(benchmark::State& state) {
    std::uint64_t w = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ncg::xw_closed_form(kConstants, w));
        w = w % 100000 + 1;
    }
}
BENCHMARK(BM_XwClosedForm);

void BM_DegreeMarginal(benchmark::State& state) {
    const std::uint64_t d = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ncg::u_d(kConstants, 4, d, 0.1, 1e-10));
    }
}
BENCHMARK(BM_DegreeMarginal)->Arg(50)->Arg(200);

}  // namespace
