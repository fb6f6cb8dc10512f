// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include "cubeslice/functional.hpp"
#include "cubeslice/section_volume.hpp"

namespace {

using namespace cubeslice;

const UnitDirection& bench_direction() {
    static const UnitDirection v = normalize(Direction({3.0, 2.0, 1.0, 1.0, 0.5, 0.25}));
    return v;
}

void BM_SlabHitsSerial(benchmark::State& state) {
    const auto& v = bench_direction();
    const SeedStream stream(Seed{1});
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(slab_hits_serial(v.coords(), n, 0.02, stream));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SlabHitsParallel(benchmark::State& state) {
    const auto& v = bench_direction();
    const SeedStream stream(Seed{1});
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(slab_hits(v.coords(), n, 0.02, stream));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_FunctionalBatchSerial(benchmark::State& state) {
    const auto dirs = random_directions(static_cast<std::size_t>(state.range(0)), 2000, Seed{7});
    const EngineConfig engine;
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_f_batch_serial(dirs, engine));
    state.SetItemsProcessed(state.iterations() * 2000);
}

void BM_FunctionalBatchParallel(benchmark::State& state) {
    const auto dirs = random_directions(static_cast<std::size_t>(state.range(0)), 2000, Seed{7});
    const EngineConfig engine;
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_f_batch(dirs, engine, Execution::parallel));
    state.SetItemsProcessed(state.iterations() * 2000);
}

void BM_QuadratureVolume(benchmark::State& state) {
    const auto dirs = random_directions(static_cast<std::size_t>(state.range(0)), 64, Seed{3});
    for (auto _ : state) {
        for (const auto& u : dirs) benchmark::DoNotOptimize(volume_quadrature(u, 1e-9).value);
    }
    state.SetItemsProcessed(state.iterations() * 64);
}

}  // namespace

BENCHMARK(BM_SlabHitsSerial)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SlabHitsParallel)->Arg(1 << 20)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FunctionalBatchSerial)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FunctionalBatchParallel)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_QuadratureVolume)->Arg(2)->Arg(3)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
