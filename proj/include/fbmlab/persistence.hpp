#pragma once

// Survival probabilities P(X_t <= f(t), 0 <= t <= T) estimated from one
// shared path batch for every horizon T. The closed event X <= f counts as
// survival; a crossing is a strict X > f at a monitored point.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fbmlab/boundaries.hpp"
#include "fbmlab/estimators.hpp"
#include "fbmlab/kernels.hpp"
#include "fbmlab/sampler.hpp"

namespace fbmlab {

enum class MonitoringMode {
  Grid,          // every grid point t_i, i >= 1
  IntegerTimes,  // only t = 1, 2, ..., floor(T)
};

std::string to_string(MonitoringMode mode);

// Smallest i >= 1 with path[i] > boundary[i], or nullopt. `boundary` holds f
// at the same grid points as `path`.
std::optional<std::size_t> first_crossing_index(std::span<const double> path,
                                                std::span<const double> boundary);

// Grid-mode form; throws BoundaryViolatedAtZero if f(0) <= 0.
std::optional<std::size_t> first_crossing_index(std::span<const double> path,
                                                const BoundarySpec& boundary,
                                                const SimulationGrid& grid);

struct SurvivalCurve {
  HurstIndex hurst;
  BoundarySpec boundary;
  MonitoringMode mode;
  std::vector<double> horizons;
  std::vector<EstimateWithCI> estimates;
  std::uint64_t n_paths;
  std::size_t grid_steps;
  double grid_horizon;
  std::uint64_t seed;
  std::vector<std::string> warnings;
};

// Per-path first-crossing recorder for several boundaries at once.
class SurvivalRecorder {
 public:
  static constexpr std::uint32_t kNoCrossing = 0xffffffffu;

  SurvivalRecorder(const SimulationGrid& grid, std::vector<BoundarySpec> boundaries,
                   MonitoringMode mode, std::vector<double> horizons, std::uint64_t n_paths);

  void operator()(std::uint64_t path_index, std::span<const double> path);

  // First crossing of boundary b on path p, in grid steps (Grid mode) or
  // integer time (IntegerTimes mode); kNoCrossing if none up to max horizon.
  std::uint32_t crossing(std::size_t b, std::uint64_t p) const {
    return crossings_[b * n_paths_ + p];
  }

  std::vector<SurvivalCurve> curves(HurstIndex hurst, std::uint64_t seed,
                                    double ci_level = 0.95) const;

 private:
  SimulationGrid grid_;
  std::vector<BoundarySpec> boundaries_;
  std::vector<std::vector<std::string>> warnings_;
  MonitoringMode mode_;
  std::vector<double> horizons_;
  std::vector<std::size_t> limits_;  // survival up to horizon j <=> crossing > limits_[j]
  std::size_t scan_end_;             // last grid index that is ever inspected
  std::size_t stride_;               // grid steps between monitored points
  std::uint64_t n_paths_;
  std::vector<std::vector<double>> tables_;
  std::vector<std::uint32_t> crossings_;
};

std::vector<SurvivalCurve> survival_curves(const PathSource& source,
                                           const std::vector<BoundarySpec>& boundaries,
                                           MonitoringMode mode, const std::vector<double>& horizons,
                                           std::uint64_t n_paths,
                                           Execution execution = Execution::Parallel);

SurvivalCurve survival_curve(HurstIndex hurst, const BoundarySpec& boundary, MonitoringMode mode,
                             const SimulationGrid& grid, const std::vector<double>& horizons,
                             std::uint64_t n_paths, std::uint64_t seed);

struct SurvivalExponent {
  ExponentFit fit;
  double target_theta;  // 1 - H
  SurvivalCurve curve;
};

// Requires >= 4 dyadic horizons spanning at least 3 octaves.
SurvivalExponent survival_exponent_from_curve(const SurvivalCurve& curve, bool with_log_correction);

SurvivalExponent survival_exponent(HurstIndex hurst, const BoundarySpec& boundary,
                                   MonitoringMode mode, const SimulationGrid& grid,
                                   const std::vector<double>& horizons, std::uint64_t n_paths,
                                   std::uint64_t seed, bool with_log_correction);

// Dyadic horizons first, first*2, ..., up to last.
std::vector<double> dyadic_horizons(double first, double last);

struct RefinementPoint {
  std::size_t steps;
  EstimateWithCI estimate;
};

// Grid-monitoring bias at fixed T: survival estimate for each step count on
// the grid [0, T].
std::vector<RefinementPoint> refinement_sweep(HurstIndex hurst, const BoundarySpec& boundary,
                                              double horizon,
                                              const std::vector<std::size_t>& step_counts,
                                              std::uint64_t n_paths, std::uint64_t seed);

// Columns: hurst,boundary_descriptor,mode,T,p_hat,stderr,n_paths,grid_steps,seed
void write_survival_csv(std::ostream& out, const std::vector<SurvivalCurve>& curves);

}  // namespace fbmlab
