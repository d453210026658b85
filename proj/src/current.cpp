#include "fbmlab/current.hpp"

#include <fmt/format.h>

#include <numbers>
#include <ostream>

#include "fbmlab/error.hpp"

namespace fbmlab {

std::string to_string(CurrentVariant variant) {
  return variant == CurrentVariant::DiscreteJN ? "JN" : "JT";
}

double log_trapezoid_exp(std::span<const double> path, std::size_t end_index, double dt) {
  if (end_index < 1 || end_index >= path.size()) {
    throw InvalidArgument("current", "trapezoid end index out of range");
  }
  LogSumExp acc;
  acc.add(path[0], 0.5 * dt);
  for (std::size_t i = 1; i < end_index; ++i) acc.add(path[i], dt);
  acc.add(path[end_index], 0.5 * dt);
  return acc.value();
}

namespace {

std::size_t jn_stride(const SimulationGrid& grid) {
  const auto per_unit = grid.steps_per_unit_time();
  if (!per_unit) throw HorizonMisaligned("current", "J_N needs integer times on the grid");
  return *per_unit;
}

std::size_t jn_end(const SimulationGrid& grid, std::size_t segment, std::size_t stride) {
  if (segment < 2) throw InvalidArgument("current", "J_N needs N >= 2");
  if (static_cast<double>(segment - 1) > grid.horizon()) {
    throw HorizonMisaligned("current", fmt::format("J_N with N = {} needs X up to time {} but "
                                                   "the grid ends at {}",
                                                   segment, segment - 1, grid.horizon()));
  }
  return (segment - 1) * stride;
}

std::size_t jt_end(const SimulationGrid& grid, double horizon) {
  const auto idx = grid.index_of(horizon);
  if (!idx || *idx == 0) {
    throw HorizonMisaligned("current", fmt::format("T = {} is not a positive grid point of "
                                                   "[0, {}] with {} steps",
                                                   horizon, grid.horizon(), grid.steps()));
  }
  return *idx;
}

}  // namespace

double compute_JN(std::span<const double> path, std::size_t segment, const SimulationGrid& grid) {
  const std::size_t stride = jn_stride(grid);
  const std::size_t end = jn_end(grid, segment, stride);
  LogSumExp acc;
  acc.add(0.0, 1.0);
  for (std::size_t i = stride; i <= end; i += stride) acc.add(path[i], 1.0);
  return 0.5 * std::exp(-acc.value());
}

double compute_JT(std::span<const double> path, double horizon, const SimulationGrid& grid) {
  return std::exp(-log_trapezoid_exp(path, jt_end(grid, horizon), grid.dt()));
}

// ---------------------------------------------------------------------------

CurrentRecorder::CurrentRecorder(const SimulationGrid& grid, CurrentVariant variant,
                                 std::vector<double> horizons, std::uint64_t n_paths)
    : grid_(grid), variant_(variant), horizons_(std::move(horizons)), n_paths_(n_paths) {
  if (horizons_.empty()) throw InvalidArgument("current", "no horizon given");
  if (n_paths_ < 1) throw InvalidArgument("current", "n_paths must be at least 1");
  if (variant_ == CurrentVariant::DiscreteJN) {
    stride_ = jn_stride(grid_);
    for (double t : horizons_) {
      if (t != std::floor(t)) throw HorizonMisaligned("current", "J_N needs integer N");
      ends_.push_back(jn_end(grid_, static_cast<std::size_t>(t), stride_));
    }
  } else {
    for (double t : horizons_) ends_.push_back(jt_end(grid_, t));
  }
  for (std::size_t j = 1; j < ends_.size(); ++j) {
    if (ends_[j] <= ends_[j - 1]) {
      throw InvalidArgument("current", "horizons must be strictly increasing");
    }
  }
  log_j_.assign(n_paths_ * horizons_.size(), 0.0);
}

void CurrentRecorder::operator()(std::uint64_t path_index, std::span<const double> path) {
  double* out = log_j_.data() + path_index * horizons_.size();
  std::size_t next = 0;
  if (variant_ == CurrentVariant::DiscreteJN) {
    LogSumExp acc;
    acc.add(0.0, 1.0);
    for (std::size_t i = stride_; next < ends_.size(); i += stride_) {
      acc.add(path[i], 1.0);
      if (i == ends_[next]) out[next++] = -std::numbers::ln2 - acc.value();
    }
  } else {
    const double dt = grid_.dt();
    LogSumExp acc;
    acc.add(path[0], 0.5 * dt);
    for (std::size_t i = 1; next < ends_.size(); ++i) {
      if (i == ends_[next]) {
        LogSumExp closed = acc;
        closed.add(path[i], 0.5 * dt);
        out[next++] = -closed.value();
      }
      acc.add(path[i], dt);
    }
  }
}

CurrentMomentCurve CurrentRecorder::curve(HurstIndex hurst, double k, std::uint64_t seed,
                                          double ci_level) const {
  if (!(k > 0.0)) throw InvalidArgument("current", "moment order k must be positive");
  CurrentMomentCurve c{hurst, k, variant_, horizons_, {}, n_paths_, grid_.steps(),
                       grid_.horizon(), seed};
  std::vector<double> samples(n_paths_);
  for (std::size_t j = 0; j < horizons_.size(); ++j) {
    for (std::uint64_t p = 0; p < n_paths_; ++p) samples[p] = std::exp(k * log_current(p, j));
    c.estimates.push_back(mean_estimate(samples, ci_level));
  }
  return c;
}

std::vector<CurrentMomentCurve> moment_curves(const PathSource& source, const std::vector<double>& ks,
                                              CurrentVariant variant,
                                              const std::vector<double>& horizons,
                                              std::uint64_t n_paths, Execution execution) {
  CurrentRecorder recorder(source.grid(), variant, horizons, n_paths);
  for_each_path(source, n_paths, execution, recorder);
  std::vector<CurrentMomentCurve> out;
  for (double k : ks) out.push_back(recorder.curve(source.hurst(), k, source.seed()));
  return out;
}

CurrentMomentCurve moment_curve(HurstIndex hurst, double k, CurrentVariant variant,
                                const SimulationGrid& grid, const std::vector<double>& horizons,
                                std::uint64_t n_paths, std::uint64_t seed) {
  if (!(k > 0.0)) throw InvalidArgument("current", "moment order k must be positive");
  const CirculantSource source(hurst, grid, seed);
  return moment_curves(source, {k}, variant, horizons, n_paths).front();
}

ExponentFit current_exponent(const CurrentMomentCurve& curve, bool with_log_correction) {
  std::vector<DesignPoint> points;
  for (std::size_t j = 0; j < curve.horizons.size(); ++j) {
    points.push_back({curve.horizons[j], curve.estimates[j]});
  }
  return fit_power_law(points, with_log_correction);
}

void write_current_csv(std::ostream& out, const std::vector<CurrentMomentCurve>& curves) {
  out << "hurst,k,variant,T,moment_hat,stderr,n_paths,grid_steps,seed\n";
  for (const auto& c : curves) {
    for (std::size_t j = 0; j < c.horizons.size(); ++j) {
      out << fmt::format("{},{},{},{},{},{},{},{},{}\n", c.hurst.value(), c.k, to_string(c.variant),
                         c.horizons[j], c.estimates[j].point, c.estimates[j].std_error, c.n_paths,
                         c.grid_steps, c.seed);
    }
  }
}

}  // namespace fbmlab
