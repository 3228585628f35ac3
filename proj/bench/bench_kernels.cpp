// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "backstab/collusion_enumeration.hpp"
#include "backstab/simulator.hpp"

using namespace backstab;

namespace {

void BM_CollusionReference(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int m = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_collusion_reference(n, m));
}

void BM_CollusionOdometer(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int m = static_cast<int>(state.range(1));
  const auto total = static_cast<std::uint64_t>(collusion_profile_count(n, m));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_collusion_range(n, m, 0, total));
}

void BM_CollusionParallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int m = static_cast<int>(state.range(1));
  const int workers = omp_get_max_threads();
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_collusion_parallel(n, m, 16 * workers, workers));
  state.counters["workers"] = workers;
}

GameConfig bench_config(int profile_index) {
  GameConfig c;
  c.n = 11;
  c.m = 3;
  c.profile = kAllProfiles[static_cast<std::size_t>(profile_index)];
  c.seed = 7;
  return c;
}

void BM_BatchSerial(benchmark::State& state) {
  const GameConfig config = bench_config(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_batch_serial(config, 20000));
  state.SetItemsProcessed(state.iterations() * 20000);
  state.SetLabel(std::string(to_string(config.profile)));
}

void BM_BatchParallel(benchmark::State& state) {
  const GameConfig config = bench_config(static_cast<int>(state.range(0)));
  const int workers = omp_get_max_threads();
  for (auto _ : state) benchmark::DoNotOptimize(run_batch(config, 20000, workers));
  state.SetItemsProcessed(state.iterations() * 20000);
  state.SetLabel(std::string(to_string(config.profile)));
  state.counters["workers"] = workers;
}

}  // namespace

BENCHMARK(BM_CollusionReference)->Args({8, 2})->Args({9, 3})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CollusionOdometer)->Args({8, 2})->Args({9, 3})->Args({10, 3})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CollusionParallel)->Args({8, 2})->Args({9, 3})->Args({10, 3})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BatchSerial)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BatchParallel)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
