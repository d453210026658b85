#include "fbmlab/kernels.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "fbmlab/numeric.hpp"

namespace fbmlab {

int worker_threads() {
  const int available = omp_get_max_threads();
  if (const char* env = std::getenv("FBMLAB_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) {
      return static_cast<int>(std::min<long>(cap, available));
    }
  }
  return available;
}

namespace {

double chunk_sum(std::span<const double> values, std::size_t chunk) {
  const std::size_t begin = chunk * kReductionChunk;
  const std::size_t end = std::min(values.size(), begin + kReductionChunk);
  CompensatedSum s;
  for (std::size_t i = begin; i < end; ++i) s.add(values[i]);
  return s.value();
}

double combine(std::span<const double> partials) {
  CompensatedSum s;
  for (double v : partials) s.add(v);
  return s.value();
}

std::size_t chunk_count(std::size_t n) { return (n + kReductionChunk - 1) / kReductionChunk; }

}  // namespace

double fixed_order_sum_serial(std::span<const double> values) {
  std::vector<double> partials(chunk_count(values.size()));
  for (std::size_t c = 0; c < partials.size(); ++c) partials[c] = chunk_sum(values, c);
  return combine(partials);
}

double fixed_order_sum_parallel(std::span<const double> values) {
  const auto chunks = static_cast<std::int64_t>(chunk_count(values.size()));
  std::vector<double> partials(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(static) num_threads(worker_threads())
  for (std::int64_t c = 0; c < chunks; ++c) {
    partials[static_cast<std::size_t>(c)] = chunk_sum(values, static_cast<std::size_t>(c));
  }
  return combine(partials);
}

}  // namespace fbmlab
