// Serial reference kernel vs the OpenMP kernel, plus the building blocks
// (Philox blocks, normals, one circulant pair) that bound their throughput.
// Thread count follows OMP_NUM_THREADS / FBMLAB_THREADS.

#include <benchmark/benchmark.h>

#include <vector>

#include "fbmlab/current.hpp"
#include "fbmlab/functionals.hpp"
#include "fbmlab/kernels.hpp"
#include "fbmlab/persistence.hpp"
#include "fbmlab/rng.hpp"
#include "fbmlab/sampler.hpp"

using namespace fbmlab;

namespace {

void BM_PhiloxBlocks(benchmark::State& state) {
  std::vector<Philox4x32::Counter> out(static_cast<std::size_t>(state.range(0)));
  std::uint32_t block = 0;
  for (auto _ : state) {
    Philox4x32::generate_blocks({block, 0, 0, 0}, {1, 2}, out);
    block += static_cast<std::uint32_t>(out.size());
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PhiloxBlocks)->Arg(32)->Arg(1024);

void BM_Normals(benchmark::State& state) {
  std::vector<double> x(static_cast<std::size_t>(state.range(0)));
  std::uint64_t stream = 0;
  for (auto _ : state) {
    NormalStream(1, stream++, StreamDomain::Test).fill(x);
    benchmark::DoNotOptimize(x.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Normals)->Arg(1 << 15);

void BM_CirculantPair(benchmark::State& state) {
  const SimulationGrid grid(static_cast<std::size_t>(state.range(0)), 1.0);
  const CirculantSource source(HurstIndex(0.7), grid, 1);
  auto ws = source.make_workspace();
  std::vector<double> a(grid.points()), b(grid.points());
  std::uint64_t pair = 0;
  for (auto _ : state) {
    source.fill_pair(pair++, *ws, a, b);
    benchmark::DoNotOptimize(a.data());
  }
  state.SetItemsProcessed(state.iterations() * 2);
}
BENCHMARK(BM_CirculantPair)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);

// A representative workload: survival + current recorders over one batch.
template <Execution E>
void BM_SurvivalAndCurrent(benchmark::State& state) {
  const SimulationGrid grid(4096, 256.0);
  const CirculantSource source(HurstIndex(0.6), grid, 9);
  const auto n = static_cast<std::uint64_t>(state.range(0));
  const auto horizons = dyadic_horizons(1, 256);
  for (auto _ : state) {
    SurvivalRecorder surv(grid, {BoundarySpec::constant(1.0)}, MonitoringMode::Grid, horizons, n);
    CurrentRecorder cur(grid, CurrentVariant::ContinuousJT, horizons, n);
    for_each_path(source, n, E, surv, cur);
    benchmark::DoNotOptimize(surv.crossing(0, 0));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = E == Execution::Serial ? 1 : worker_threads();
}
BENCHMARK(BM_SurvivalAndCurrent<Execution::Serial>)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SurvivalAndCurrent<Execution::Parallel>)->Arg(512)->Unit(benchmark::kMillisecond);

template <Execution E>
void BM_Functionals(benchmark::State& state) {
  const SimulationGrid grid(4096, 1.0);
  const CirculantSource source(HurstIndex(0.5), grid, 4);
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    FunctionalRecorder rec(grid, n);
    for_each_path(source, n, E, rec);
    benchmark::DoNotOptimize(rec.value(FunctionalKind::TauMax, 0));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Functionals<Execution::Serial>)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Functionals<Execution::Parallel>)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
