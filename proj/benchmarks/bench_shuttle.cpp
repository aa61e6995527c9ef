#include <benchmark/benchmark.h>

#include "salz/landscape.hpp"
#include "salz/shuttle.hpp"

namespace {

salz::Landscape bench_landscape() {
    salz::SynthParams sp;
    sp.seed = 3;
    sp.corr_length = 3.0;
    sp.mean_coupling = 0.003;
    return salz::synth_landscape(sp);
}

void BM_Synthesize(benchmark::State& state) {
    salz::SynthParams sp;
    sp.corr_length = 3.0;
    for (auto _ : state) benchmark::DoNotOptimize(salz::synth_landscape(sp).positions().size());
}
BENCHMARK(BM_Synthesize);

void BM_MakeSchedule(benchmark::State& state) {
    const salz::Landscape land = bench_landscape();
    const auto kind = static_cast<salz::ScheduleKind>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(salz::make_schedule(land, kind, 1e-3, {1e-5, 1e-1}).speeds.size());
}
BENCHMARK(BM_MakeSchedule)->DenseRange(0, 2);

void BM_ShuttleSimulate(benchmark::State& state) {
    const salz::Landscape land = bench_landscape();
    const auto kind = static_cast<salz::ScheduleKind>(state.range(0));
    const salz::VelocitySchedule sched = salz::make_schedule(land, kind, 1e-3, {1e-5, 1e-1});
    for (auto _ : state) benchmark::DoNotOptimize(salz::shuttle_simulate(land, sched, {}).fidelity);
}
BENCHMARK(BM_ShuttleSimulate)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

}  // namespace
