#pragma once

// Extremal and occupation functionals of a path on [0, 1]:
//   tau_max  argmax of X (smallest grid index on ties),
//   z_minus  last zero in (0, 1), from the last sign change, interpolated,
//   s_plus   Lebesgue measure of {X > 0} under linear interpolation,
// their small-value probabilities P(xi < eps), the Laplace transform of the
// running maximum, and closed-form Brownian references.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fbmlab/estimators.hpp"
#include "fbmlab/kernels.hpp"
#include "fbmlab/sampler.hpp"

namespace fbmlab {

enum class FunctionalKind { TauMax, LastZero, PositiveMeasure };

std::string to_string(FunctionalKind kind);

// All three require grid.horizon() == 1 (HorizonMisaligned otherwise).
double compute_tau_max(std::span<const double> path, const SimulationGrid& grid);
double compute_last_zero(std::span<const double> path, const SimulationGrid& grid);
double compute_positive_measure(std::span<const double> path, const SimulationGrid& grid);

// First sign change at or after the grid time `after`, interpolated;
// +infinity if the path has none before the grid ends.
double compute_first_zero_after(std::span<const double> path, const SimulationGrid& grid,
                                double after);

// Largest i with X_{t_i} >= 0 (0 if the path is negative after the start).
// X < 0 at every grid point of [eps, 1] iff last_nonnegative_index < eps / dt.
std::size_t last_nonnegative_index(std::span<const double> path);

struct SmallValueCurve {
  HurstIndex hurst;
  FunctionalKind kind;
  std::vector<double> epsilons;  // decreasing
  std::vector<EstimateWithCI> estimates;  // of P(xi < eps)
  std::uint64_t n_paths;
  std::size_t grid_steps;
  std::uint64_t seed;
};

// Stores tau_max, z_minus, s_plus and the last nonnegative index per path.
class FunctionalRecorder {
 public:
  FunctionalRecorder(const SimulationGrid& grid, std::uint64_t n_paths);

  void operator()(std::uint64_t path_index, std::span<const double> path);

  double value(FunctionalKind kind, std::uint64_t path) const;
  std::size_t last_nonnegative(std::uint64_t path) const { return last_nonneg_[path]; }

  // Requires dyadic, decreasing epsilons with eps >= 8 dt.
  SmallValueCurve curve(FunctionalKind kind, const std::vector<double>& epsilons, HurstIndex hurst,
                        std::uint64_t seed, double ci_level = 0.95) const;

  // P(X < 0 at every grid point of [eps, 1]) for each eps.
  std::vector<EstimateWithCI> negative_tail(const std::vector<double>& epsilons,
                                            double ci_level = 0.95) const;

 private:
  SimulationGrid grid_;
  std::uint64_t n_paths_;
  std::vector<double> values_;  // n_paths x 3
  std::vector<std::size_t> last_nonneg_;
};

void check_epsilons(const std::vector<double>& epsilons, const SimulationGrid& grid);

std::vector<SmallValueCurve> small_value_curves(const PathSource& source,
                                                const std::vector<FunctionalKind>& kinds,
                                                const std::vector<double>& epsilons,
                                                std::uint64_t n_paths,
                                                Execution execution = Execution::Parallel);

SmallValueCurve small_value_curve(HurstIndex hurst, FunctionalKind kind, const SimulationGrid& grid,
                                  const std::vector<double>& epsilons, std::uint64_t n_paths,
                                  std::uint64_t seed);

// Fit of P(xi < eps) ~ eps^theta (as a power law in 1/eps); target 1 - H.
ExponentFit small_value_exponent(const SmallValueCurve& curve, bool with_log_correction = false);

// How E[exp(-lambda X*_1)] is evaluated on a discrete grid.
enum class LaplaceScaling {
  // max over the grid points of [0, 1]; grid resolution fixed for all lambda.
  FixedGrid,
  // lambda X*_1 has the law of X*_{lambda^{1/H}}: use the max over grid points
  // of [0, lambda^{1/H}], so every lambda sees the same resolution in its own
  // natural time scale.
  SelfSimilar,
};

std::string to_string(LaplaceScaling scaling);

struct LaplaceCurve {
  HurstIndex hurst;
  LaplaceScaling scaling;
  std::vector<double> lambdas;
  std::vector<EstimateWithCI> estimates;  // of E[exp(-lambda X*_1)]
  std::uint64_t n_paths;
  std::size_t grid_steps;
  double grid_horizon;
  std::uint64_t seed;
};

class MaximumRecorder {
 public:
  MaximumRecorder(const SimulationGrid& grid, HurstIndex hurst, std::vector<double> lambdas,
                  LaplaceScaling scaling, std::uint64_t n_paths);

  void operator()(std::uint64_t path_index, std::span<const double> path);

  LaplaceCurve curve(std::uint64_t seed, double ci_level = 0.95) const;

 private:
  SimulationGrid grid_;
  HurstIndex hurst_;
  std::vector<double> lambdas_;
  LaplaceScaling scaling_;
  std::vector<std::size_t> ends_;  // grid index whose running max each lambda uses
  std::vector<double> multipliers_;  // exponent is -multiplier * running max
  std::uint64_t n_paths_;
  std::vector<double> maxima_;  // n_paths x lambdas
};

LaplaceCurve laplace_transform_max(const PathSource& source, const std::vector<double>& lambdas,
                                   LaplaceScaling scaling, std::uint64_t n_paths,
                                   Execution execution = Execution::Parallel);

LaplaceCurve laplace_transform_max(HurstIndex hurst, const SimulationGrid& grid,
                                   const std::vector<double>& lambdas, std::uint64_t n_paths,
                                   std::uint64_t seed,
                                   LaplaceScaling scaling = LaplaceScaling::FixedGrid);

// Fit over lambda >= 1; target (1 - H) / H.
ExponentFit laplace_exponent(const LaplaceCurve& curve, bool with_log_correction = false);

// Brownian references.
double standard_normal_cdf(double x);
double arcsine_cdf(double x);              // (2/pi) arcsin sqrt(x)
double bm_survival(double level, double horizon);  // 2 Phi(level / sqrt(T)) - 1

// Columns: hurst,functional,epsilon_or_lambda,estimate,stderr,n_paths,grid_steps,seed
void write_functional_csv(std::ostream& out, const std::vector<SmallValueCurve>& curves);
void write_laplace_csv(std::ostream& out, const std::vector<LaplaceCurve>& curves);

}  // namespace fbmlab
