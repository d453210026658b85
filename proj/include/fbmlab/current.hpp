#pragma once

// Steady-state currents
//   J_N = 1/2 (1 + sum_{n=1}^{N-1} exp(X_n))^{-1}   (discrete segment)
//   J_T = (int_0^T exp(X_s) ds)^{-1}                 (continuous time)
// and their moment curves E[J^k] over dyadic horizons. All exponential sums
// are accumulated in log space with a running maximum.

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "fbmlab/estimators.hpp"
#include "fbmlab/kernels.hpp"
#include "fbmlab/sampler.hpp"

namespace fbmlab {

enum class CurrentVariant { DiscreteJN, ContinuousJT };

std::string to_string(CurrentVariant variant);

// log(sum_i w_i exp(x_i)), accumulated one term at a time.
class LogSumExp {
 public:
  void add(double x, double weight) noexcept {
    if (x > max_) {
      sum_ = sum_ * std::exp(max_ - x) + weight;
      max_ = x;
    } else {
      sum_ += weight * std::exp(x - max_);
    }
  }
  double value() const noexcept { return max_ + std::log(sum_); }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
};

// log of the trapezoidal integral of exp(X) over grid points 0..end_index.
double log_trapezoid_exp(std::span<const double> path, std::size_t end_index, double dt);

double compute_JN(std::span<const double> path, std::size_t segment, const SimulationGrid& grid);
double compute_JT(std::span<const double> path, double horizon, const SimulationGrid& grid);

struct CurrentMomentCurve {
  HurstIndex hurst;
  double k;
  CurrentVariant variant;
  std::vector<double> horizons;
  std::vector<EstimateWithCI> estimates;  // of E[J^k]
  std::uint64_t n_paths;
  std::size_t grid_steps;
  double grid_horizon;
  std::uint64_t seed;
};

// Records log J per path and horizon; moments for any k are formed afterwards.
class CurrentRecorder {
 public:
  CurrentRecorder(const SimulationGrid& grid, CurrentVariant variant, std::vector<double> horizons,
                  std::uint64_t n_paths);

  void operator()(std::uint64_t path_index, std::span<const double> path);

  double log_current(std::uint64_t path, std::size_t horizon) const {
    return log_j_[path * horizons_.size() + horizon];
  }

  CurrentMomentCurve curve(HurstIndex hurst, double k, std::uint64_t seed,
                           double ci_level = 0.95) const;

 private:
  SimulationGrid grid_;
  CurrentVariant variant_;
  std::vector<double> horizons_;
  std::vector<std::size_t> ends_;  // grid index of T (JT) or of N - 1 (JN)
  std::size_t stride_ = 1;
  std::uint64_t n_paths_;
  std::vector<double> log_j_;
};

std::vector<CurrentMomentCurve> moment_curves(const PathSource& source, const std::vector<double>& ks,
                                              CurrentVariant variant,
                                              const std::vector<double>& horizons,
                                              std::uint64_t n_paths,
                                              Execution execution = Execution::Parallel);

CurrentMomentCurve moment_curve(HurstIndex hurst, double k, CurrentVariant variant,
                                const SimulationGrid& grid, const std::vector<double>& horizons,
                                std::uint64_t n_paths, std::uint64_t seed);

ExponentFit current_exponent(const CurrentMomentCurve& curve, bool with_log_correction);

// Columns: hurst,k,variant,T,moment_hat,stderr,n_paths,grid_steps,seed
void write_current_csv(std::ostream& out, const std::vector<CurrentMomentCurve>& curves);

}  // namespace fbmlab
