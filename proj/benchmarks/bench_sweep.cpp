#include <benchmark/benchmark.h>

#include "salz/sweeps.hpp"

namespace {

void BM_Sweep(benchmark::State& state) {
    salz::SweepGrid grid;
    grid.alpha_axis = salz::linear_axis(0.5, 10.0, 8);
    grid.beta_axis = salz::linear_axis(-5.0, 10.0, 8);
    const salz::SweepOptions opts{static_cast<unsigned>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(salz::run_sweep(grid, opts).size());
    state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}
BENCHMARK(BM_Sweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
