#include <doctest.h>

#include <omp.h>

#include <cstdlib>
#include <vector>

#include "fbmlab/current.hpp"
#include "fbmlab/functionals.hpp"
#include "fbmlab/kernels.hpp"
#include "fbmlab/numeric.hpp"
#include "fbmlab/persistence.hpp"

using namespace fbmlab;

namespace {

struct Copier {
  std::size_t width;
  std::vector<double> values;
  void operator()(std::uint64_t p, std::span<const double> path) {
    std::copy(path.begin(), path.end(), values.begin() + static_cast<std::ptrdiff_t>(p * width));
  }
};

std::vector<double> run_copy(const PathSource& source, std::uint64_t n, Execution exec) {
  Copier c{source.grid().points(), std::vector<double>(n * source.grid().points())};
  for_each_path(source, n, exec, c);
  return c.values;
}

}  // namespace

TEST_CASE("serial and parallel kernels produce identical paths") {
  omp_set_num_threads(4);
  const CirculantSource source(HurstIndex(0.7), SimulationGrid(128, 8.0), 31);
  for (std::uint64_t n : {1u, 2u, 7u, 64u, 333u}) {
    CAPTURE(n);
    const auto serial = run_copy(source, n, Execution::Serial);
    const auto parallel = run_copy(source, n, Execution::Parallel);
    CHECK(serial == parallel);
  }
  // Streaming and whole-batch sampling agree as well.
  const auto batch = sample_fbm_batch(HurstIndex(0.7), SimulationGrid(128, 8.0), 333, 31);
  const auto streamed = run_copy(source, 333, Execution::Parallel);
  CHECK(std::vector<double>(batch.values().begin(), batch.values().end()) == streamed);
}

TEST_CASE("recorders are independent of execution mode and thread count") {
  const SimulationGrid grid(256, 16.0);
  const CirculantSource source(HurstIndex(0.4), grid, 8);
  const std::vector<double> horizons{1, 2, 4, 8, 16};
  auto run_all = [&](Execution exec, int threads) {
    omp_set_num_threads(threads);
    SurvivalRecorder s(grid, {BoundarySpec::constant(1.0)}, MonitoringMode::Grid, horizons, 501);
    CurrentRecorder j(grid, CurrentVariant::ContinuousJT, horizons, 501);
    for_each_path(source, 501, exec, s, j);
    const auto sc = s.curves(source.hurst(), 8).front();
    const auto jc = j.curve(source.hurst(), 1.0, 8);
    std::vector<double> out;
    for (const auto& e : sc.estimates) out.push_back(e.point);
    for (const auto& e : jc.estimates) {
      out.push_back(e.point);
      out.push_back(e.std_error);
    }
    return out;
  };
  const auto ref = run_all(Execution::Serial, 1);
  CHECK(run_all(Execution::Parallel, 1) == ref);
  CHECK(run_all(Execution::Parallel, 3) == ref);
  CHECK(run_all(Execution::Parallel, 4) == ref);
}

TEST_CASE("FBMLAB_THREADS caps the worker count") {
  omp_set_num_threads(4);
  ::setenv("FBMLAB_THREADS", "2", 1);
  CHECK(worker_threads() == 2);
  ::setenv("FBMLAB_THREADS", "16", 1);
  CHECK(worker_threads() == 4);
  ::setenv("FBMLAB_THREADS", "junk", 1);
  CHECK(worker_threads() == 4);
  ::unsetenv("FBMLAB_THREADS");
  CHECK(worker_threads() == 4);
}

TEST_CASE("fixed-order sums") {
  std::vector<double> x(3 * kReductionChunk + 17);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = (i % 2 ? 1e16 : -1e16) + 0.1 * static_cast<double>(i % 7);
  omp_set_num_threads(1);
  const double serial = fixed_order_sum_serial(x);
  omp_set_num_threads(4);
  CHECK(fixed_order_sum_parallel(x) == serial);
  CHECK(fixed_order_sum(std::span<const double>()) == 0.0);

  // Compensation: 1 + 1e100 + 1 - 1e100 = 2.
  const std::vector<double> hard{1.0, 1e100, 1.0, -1e100};
  CHECK(fixed_order_sum(hard) == 2.0);
}

TEST_CASE("kernel errors surface with their message") {
  const SimulationGrid grid(8, 1.0);
  const auto batch = sample_fbm_batch(HurstIndex(0.5), grid, 3, 1);
  const BatchSource source(batch);
  Copier c{grid.points(), std::vector<double>(10 * grid.points())};
  CHECK_THROWS_AS(for_each_path(source, 10, Execution::Parallel, c), InvalidArgument);
  CHECK_THROWS_AS(for_each_path(source, 0, Execution::Serial, c), InvalidArgument);
}
