#include <benchmark/benchmark.h>

#include "salz/models.hpp"
#include "salz/propagator.hpp"

namespace {

void BM_AdaptiveFixedWindow(benchmark::State& state) {
    const salz::GenLZModel model({1.0, static_cast<double>(state.range(0)), 2.0});
    salz::PropagationConfig cfg;
    cfg.t0 = 20.0;
    for (auto _ : state) benchmark::DoNotOptimize(salz::propagate(model, cfg).p);
}
BENCHMARK(BM_AdaptiveFixedWindow)->Arg(1)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_Autoconverge(benchmark::State& state) {
    const salz::GenLZModel model({1.0, 5.0, static_cast<double>(state.range(0))});
    for (auto _ : state) benchmark::DoNotOptimize(salz::propagate_autoconverge(model, {}).p);
}
BENCHMARK(BM_Autoconverge)->Arg(-2)->Arg(0)->Arg(2)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_FixedStep(benchmark::State& state) {
    const salz::GenLZModel model({1.0, 5.0, 2.0});
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(salz::propagate_fixed_step(model, -20.0, 20.0, n).p);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FixedStep)->Range(1 << 10, 1 << 16)->Unit(benchmark::kMillisecond);

}  // namespace
