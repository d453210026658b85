#pragma once

// Helpers shared by the unit tests: injected batches and small statistics.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "fbmlab/sampler.hpp"

namespace fbmlab::testing {

// Batch whose path p is f(p, t_i) at every grid point (f must vanish at 0).
inline PathBatch injected_batch(const SimulationGrid& grid, std::uint64_t n_paths,
                                const std::function<double(std::uint64_t, double)>& f,
                                double hurst = 0.5) {
  std::vector<double> values(n_paths * grid.points());
  for (std::uint64_t p = 0; p < n_paths; ++p) {
    for (std::size_t i = 0; i < grid.points(); ++i) {
      values[p * grid.points() + i] = i == 0 ? 0.0 : f(p, grid.time(i));
    }
  }
  return PathBatch(grid, HurstIndex(hurst), n_paths, std::move(values), 0,
                   SamplingMethod::Injected);
}

inline PathBatch single_path(std::vector<double> values, double horizon, double hurst = 0.5) {
  const SimulationGrid grid(values.size() - 1, horizon);
  return PathBatch(grid, HurstIndex(hurst), 1, std::move(values), 0, SamplingMethod::Injected);
}

struct MeanSe {
  double mean;
  double se;
};

inline MeanSe mean_se(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  const double var = ss / static_cast<double>(x.size() - 1);
  return {m, std::sqrt(var / static_cast<double>(x.size()))};
}

}  // namespace fbmlab::testing
