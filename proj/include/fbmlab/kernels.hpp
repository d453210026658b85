#pragma once

// Path-streaming kernels. Every experiment is "generate path p, evaluate some
// per-path statistics, store them in slot p"; the parallel kernel splits the
// pair index range across OpenMP threads, the serial kernel is the reference
// it is tested against. Both produce identical per-path results because path
// p depends only on (source, p).
//
// Observers are callables `void(std::uint64_t path_index, std::span<const double> path)`.
// The parallel kernel invokes them concurrently for distinct path indices, so
// they must only write per-path slots.

#include <omp.h>

#include <cstdint>
#include <span>
#include <vector>

#include "fbmlab/error.hpp"
#include "fbmlab/sampler.hpp"

namespace fbmlab {

enum class Execution { Serial, Parallel };

// Worker count: FBMLAB_THREADS if set (and positive), else the OpenMP default.
int worker_threads();

template <class... Observers>
void for_each_path_serial(const PathSource& source, std::uint64_t n_paths,
                          Observers&... observers) {
  if (n_paths < 1) throw InvalidArgument("kernels", "n_paths must be at least 1");
  const std::size_t w = source.grid().points();
  auto ws = source.make_workspace();
  std::vector<double> first(w), second(w);
  const std::uint64_t pairs = (n_paths + 1) / 2;
  for (std::uint64_t p = 0; p < pairs; ++p) {
    source.fill_pair(p, *ws, first, second);
    (observers(2 * p, std::span<const double>(first)), ...);
    if (2 * p + 1 < n_paths) (observers(2 * p + 1, std::span<const double>(second)), ...);
  }
}

template <class... Observers>
void for_each_path_parallel(const PathSource& source, std::uint64_t n_paths,
                            Observers&... observers) {
  if (n_paths < 1) throw InvalidArgument("kernels", "n_paths must be at least 1");
  const std::size_t w = source.grid().points();
  const auto pairs = static_cast<std::int64_t>((n_paths + 1) / 2);
  bool failed = false;
#pragma omp parallel num_threads(worker_threads())
  {
    auto ws = source.make_workspace();
    std::vector<double> first(w), second(w);
#pragma omp for schedule(dynamic, 8)
    for (std::int64_t sp = 0; sp < pairs; ++sp) {
      const auto p = static_cast<std::uint64_t>(sp);
      try {
        source.fill_pair(p, *ws, first, second);
        (observers(2 * p, std::span<const double>(first)), ...);
        if (2 * p + 1 < n_paths) (observers(2 * p + 1, std::span<const double>(second)), ...);
      } catch (...) {
#pragma omp atomic write
        failed = true;
      }
    }
  }
  // Exceptions cannot cross the parallel region; rerun serially to surface
  // the original error with its message.
  if (failed) for_each_path_serial(source, n_paths, observers...);
}

template <class... Observers>
void for_each_path(const PathSource& source, std::uint64_t n_paths, Execution execution,
                   Observers&... observers) {
  if (execution == Execution::Serial) {
    for_each_path_serial(source, n_paths, observers...);
  } else {
    for_each_path_parallel(source, n_paths, observers...);
  }
}

}  // namespace fbmlab
