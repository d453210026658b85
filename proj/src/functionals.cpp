#include "fbmlab/functionals.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "fbmlab/error.hpp"

namespace fbmlab {

std::string to_string(FunctionalKind kind) {
  switch (kind) {
    case FunctionalKind::TauMax: return "tau_max";
    case FunctionalKind::LastZero: return "last_zero";
    case FunctionalKind::PositiveMeasure: return "positive_measure";
  }
  return "unknown";
}

std::string to_string(LaplaceScaling scaling) {
  return scaling == LaplaceScaling::FixedGrid ? "grid" : "self-similar";
}

namespace {

void require_unit_horizon(const SimulationGrid& grid) {
  if (grid.horizon() != 1.0) {
    throw HorizonMisaligned("functionals", fmt::format("functionals live on [0, 1], grid horizon "
                                                       "is {}",
                                                       grid.horizon()));
  }
}

int sign(double x) { return (x > 0.0) - (x < 0.0); }

// Root of the linear interpolant on [t_i, t_i + dt] given a sign change.
double crossing_time(double t_i, double dt, double a, double b) {
  if (a == 0.0) return t_i;
  return t_i + dt * (a / (a - b));
}

constexpr std::size_t kKinds = 3;

std::size_t slot(FunctionalKind kind) { return static_cast<std::size_t>(kind); }

}  // namespace

double compute_tau_max(std::span<const double> path, const SimulationGrid& grid) {
  require_unit_horizon(grid);
  std::size_t best = 0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (path[i] > path[best]) best = i;
  }
  return grid.time(best);
}

double compute_last_zero(std::span<const double> path, const SimulationGrid& grid) {
  require_unit_horizon(grid);
  const double dt = grid.dt();
  for (std::size_t i = path.size() - 1; i-- > 0;) {
    if (sign(path[i]) != sign(path[i + 1])) {
      return crossing_time(grid.time(i), dt, path[i], path[i + 1]);
    }
  }
  return 0.0;
}

double compute_positive_measure(std::span<const double> path, const SimulationGrid& grid) {
  require_unit_horizon(grid);
  const double dt = grid.dt();
  std::size_t full = 0;
  double partial = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const double a = path[i];
    const double b = path[i + 1];
    if (a > 0.0 && b > 0.0) {
      ++full;
    } else if (a > 0.0 || b > 0.0) {
      const double pos = std::max(a, b);
      const double neg = -std::min(a, b);
      partial += pos / (pos + neg);
    }
  }
  return dt * (static_cast<double>(full) + partial);
}

double compute_first_zero_after(std::span<const double> path, const SimulationGrid& grid,
                                double after) {
  const auto start = grid.index_of(after);
  if (!start) throw HorizonMisaligned("functionals", "z+ start time is not a grid point");
  const double dt = grid.dt();
  for (std::size_t i = *start; i + 1 < path.size(); ++i) {
    if (path[i] == 0.0) return grid.time(i);
    if (sign(path[i]) != sign(path[i + 1])) {
      return crossing_time(grid.time(i), dt, path[i], path[i + 1]);
    }
  }
  return std::numeric_limits<double>::infinity();
}

std::size_t last_nonnegative_index(std::span<const double> path) {
  for (std::size_t i = path.size(); i-- > 0;) {
    if (path[i] >= 0.0) return i;
  }
  return 0;
}

// ---------------------------------------------------------------------------

FunctionalRecorder::FunctionalRecorder(const SimulationGrid& grid, std::uint64_t n_paths)
    : grid_(grid), n_paths_(n_paths) {
  require_unit_horizon(grid_);
  if (n_paths_ < 1) throw InvalidArgument("functionals", "n_paths must be at least 1");
  values_.assign(n_paths_ * kKinds, 0.0);
  last_nonneg_.assign(n_paths_, 0);
}

void FunctionalRecorder::operator()(std::uint64_t path_index, std::span<const double> path) {
  double* v = values_.data() + path_index * kKinds;
  v[slot(FunctionalKind::TauMax)] = compute_tau_max(path, grid_);
  v[slot(FunctionalKind::LastZero)] = compute_last_zero(path, grid_);
  v[slot(FunctionalKind::PositiveMeasure)] = compute_positive_measure(path, grid_);
  last_nonneg_[path_index] = last_nonnegative_index(path);
}

double FunctionalRecorder::value(FunctionalKind kind, std::uint64_t path) const {
  return values_[path * kKinds + slot(kind)];
}

void check_epsilons(const std::vector<double>& epsilons, const SimulationGrid& grid) {
  if (epsilons.empty()) throw InvalidArgument("functionals", "no epsilon given");
  for (std::size_t j = 0; j < epsilons.size(); ++j) {
    const double e = epsilons[j];
    if (!(e > 0.0 && e < 1.0)) throw InvalidArgument("functionals", "epsilon must lie in (0, 1)");
    const double octave = std::log2(e);
    if (std::abs(octave - std::round(octave)) > 1e-12) {
      throw InvalidArgument("functionals", fmt::format("epsilon {} is not dyadic", e));
    }
    if (j > 0 && !(e < epsilons[j - 1])) {
      throw InvalidArgument("functionals", "epsilons must be strictly decreasing");
    }
    if (e < 8.0 * grid.dt()) {
      throw EpsilonBelowResolution(fmt::format("epsilon {} is below 8 dt = {}", e, 8.0 * grid.dt()));
    }
  }
}

SmallValueCurve FunctionalRecorder::curve(FunctionalKind kind, const std::vector<double>& epsilons,
                                          HurstIndex hurst, std::uint64_t seed,
                                          double ci_level) const {
  check_epsilons(epsilons, grid_);
  SmallValueCurve c{hurst, kind, epsilons, {}, n_paths_, grid_.steps(), seed};
  for (double e : epsilons) {
    std::uint64_t below = 0;
    for (std::uint64_t p = 0; p < n_paths_; ++p) below += value(kind, p) < e ? 1 : 0;
    c.estimates.push_back(bernoulli_estimate(below, n_paths_, ci_level));
  }
  return c;
}

std::vector<EstimateWithCI> FunctionalRecorder::negative_tail(const std::vector<double>& epsilons,
                                                              double ci_level) const {
  std::vector<EstimateWithCI> out;
  for (double e : epsilons) {
    const auto first = grid_.index_of(e);
    if (!first) throw HorizonMisaligned("functionals", "epsilon is not a grid point");
    std::uint64_t hits = 0;
    for (std::uint64_t p = 0; p < n_paths_; ++p) hits += last_nonneg_[p] < *first ? 1 : 0;
    out.push_back(bernoulli_estimate(hits, n_paths_, ci_level));
  }
  return out;
}

std::vector<SmallValueCurve> small_value_curves(const PathSource& source,
                                                const std::vector<FunctionalKind>& kinds,
                                                const std::vector<double>& epsilons,
                                                std::uint64_t n_paths, Execution execution) {
  check_epsilons(epsilons, source.grid());
  FunctionalRecorder recorder(source.grid(), n_paths);
  for_each_path(source, n_paths, execution, recorder);
  std::vector<SmallValueCurve> out;
  for (auto kind : kinds) out.push_back(recorder.curve(kind, epsilons, source.hurst(), source.seed()));
  return out;
}

SmallValueCurve small_value_curve(HurstIndex hurst, FunctionalKind kind, const SimulationGrid& grid,
                                  const std::vector<double>& epsilons, std::uint64_t n_paths,
                                  std::uint64_t seed) {
  require_unit_horizon(grid);
  check_epsilons(epsilons, grid);
  const CirculantSource source(hurst, grid, seed);
  return small_value_curves(source, {kind}, epsilons, n_paths).front();
}

ExponentFit small_value_exponent(const SmallValueCurve& curve, bool with_log_correction) {
  std::vector<DesignPoint> points;
  for (std::size_t j = 0; j < curve.epsilons.size(); ++j) {
    points.push_back({1.0 / curve.epsilons[j], curve.estimates[j]});
  }
  return fit_power_law(points, with_log_correction);
}

// ---------------------------------------------------------------------------

MaximumRecorder::MaximumRecorder(const SimulationGrid& grid, HurstIndex hurst,
                                 std::vector<double> lambdas, LaplaceScaling scaling,
                                 std::uint64_t n_paths)
    : grid_(grid), hurst_(hurst), lambdas_(std::move(lambdas)), scaling_(scaling),
      n_paths_(n_paths) {
  if (lambdas_.empty()) throw InvalidArgument("functionals", "no lambda given");
  if (n_paths_ < 1) throw InvalidArgument("functionals", "n_paths must be at least 1");
  for (std::size_t j = 0; j < lambdas_.size(); ++j) {
    if (!(lambdas_[j] >= 0.0) || (j > 0 && !(lambdas_[j] > lambdas_[j - 1]))) {
      throw InvalidArgument("functionals", "lambdas must be nonnegative and strictly increasing");
    }
  }
  if (scaling_ == LaplaceScaling::FixedGrid) {
    const auto one = grid_.index_of(1.0);
    if (!one || *one == 0) throw HorizonMisaligned("functionals", "t = 1 is not a grid point");
    ends_.assign(lambdas_.size(), *one);
    multipliers_ = lambdas_;
  } else {
    for (double lambda : lambdas_) {
      const double horizon = std::pow(lambda, 1.0 / hurst_.value());
      if (horizon > grid_.horizon() * (1.0 + 1e-12)) {
        throw HorizonMisaligned("functionals",
                                fmt::format("lambda {} needs the maximum over [0, {}] but the grid "
                                            "ends at {}",
                                            lambda, horizon, grid_.horizon()));
      }
      const auto idx = static_cast<std::size_t>(std::floor(horizon / grid_.dt() * (1.0 + 1e-12)));
      ends_.push_back(std::min(idx, grid_.steps()));
      multipliers_.push_back(1.0);
    }
  }
  maxima_.assign(n_paths_ * lambdas_.size(), 0.0);
}

void MaximumRecorder::operator()(std::uint64_t path_index, std::span<const double> path) {
  double* out = maxima_.data() + path_index * lambdas_.size();
  // ends_ is nondecreasing in lambda for both scalings.
  double running = path[0];
  std::size_t i = 0;
  for (std::size_t j = 0; j < ends_.size(); ++j) {
    for (; i < ends_[j]; ++i) running = std::max(running, path[i + 1]);
    out[j] = running;
  }
}

LaplaceCurve MaximumRecorder::curve(std::uint64_t seed, double ci_level) const {
  LaplaceCurve c{hurst_, scaling_, lambdas_, {}, n_paths_, grid_.steps(), grid_.horizon(), seed};
  std::vector<double> samples(n_paths_);
  for (std::size_t j = 0; j < lambdas_.size(); ++j) {
    for (std::uint64_t p = 0; p < n_paths_; ++p) {
      samples[p] = std::exp(-multipliers_[j] * maxima_[p * lambdas_.size() + j]);
    }
    c.estimates.push_back(n_paths_ >= 2 ? mean_estimate(samples, ci_level)
                                        : EstimateWithCI{samples[0], 0.0, 1, ci_level,
                                                         samples[0], samples[0]});
  }
  return c;
}

LaplaceCurve laplace_transform_max(const PathSource& source, const std::vector<double>& lambdas,
                                   LaplaceScaling scaling, std::uint64_t n_paths,
                                   Execution execution) {
  MaximumRecorder recorder(source.grid(), source.hurst(), lambdas, scaling, n_paths);
  for_each_path(source, n_paths, execution, recorder);
  return recorder.curve(source.seed());
}

LaplaceCurve laplace_transform_max(HurstIndex hurst, const SimulationGrid& grid,
                                   const std::vector<double>& lambdas, std::uint64_t n_paths,
                                   std::uint64_t seed, LaplaceScaling scaling) {
  const CirculantSource source(hurst, grid, seed);
  return laplace_transform_max(source, lambdas, scaling, n_paths);
}

ExponentFit laplace_exponent(const LaplaceCurve& curve, bool with_log_correction) {
  std::vector<DesignPoint> points;
  for (std::size_t j = 0; j < curve.lambdas.size(); ++j) {
    if (curve.lambdas[j] >= 1.0) points.push_back({curve.lambdas[j], curve.estimates[j]});
  }
  return fit_power_law(points, with_log_correction);
}

// ---------------------------------------------------------------------------

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double arcsine_cdf(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("functionals", "arcsine_cdf needs x in [0, 1]");
  return 2.0 / std::numbers::pi * std::asin(std::sqrt(x));
}

double bm_survival(double level, double horizon) {
  if (!(level > 0.0) || !(horizon > 0.0)) {
    throw InvalidArgument("functionals", "bm_survival needs a > 0 and T > 0");
  }
  return 2.0 * standard_normal_cdf(level / std::sqrt(horizon)) - 1.0;
}

void write_functional_csv(std::ostream& out, const std::vector<SmallValueCurve>& curves) {
  out << "hurst,functional,epsilon_or_lambda,estimate,stderr,n_paths,grid_steps,seed\n";
  for (const auto& c : curves) {
    for (std::size_t j = 0; j < c.epsilons.size(); ++j) {
      out << fmt::format("{},{},{},{},{},{},{},{}\n", c.hurst.value(), to_string(c.kind),
                         c.epsilons[j], c.estimates[j].point, c.estimates[j].std_error, c.n_paths,
                         c.grid_steps, c.seed);
    }
  }
}

void write_laplace_csv(std::ostream& out, const std::vector<LaplaceCurve>& curves) {
  out << "hurst,functional,epsilon_or_lambda,estimate,stderr,n_paths,grid_steps,seed\n";
  for (const auto& c : curves) {
    for (std::size_t j = 0; j < c.lambdas.size(); ++j) {
      out << fmt::format("{},laplace_max,{},{},{},{},{},{}\n", c.hurst.value(), c.lambdas[j],
                         c.estimates[j].point, c.estimates[j].std_error, c.n_paths, c.grid_steps,
                         c.seed);
    }
  }
}

}  // namespace fbmlab
