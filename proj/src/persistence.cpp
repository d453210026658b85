#include "fbmlab/persistence.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>

#include "fbmlab/error.hpp"

namespace fbmlab {

std::string to_string(MonitoringMode mode) {
  return mode == MonitoringMode::Grid ? "grid" : "integer";
}

std::optional<std::size_t> first_crossing_index(std::span<const double> path,
                                                std::span<const double> boundary) {
  const std::size_t n = std::min(path.size(), boundary.size());
  for (std::size_t i = 1; i < n; ++i) {
    if (path[i] > boundary[i]) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> first_crossing_index(std::span<const double> path,
                                                const BoundarySpec& boundary,
                                                const SimulationGrid& grid) {
  if (!(eval_boundary(boundary, 0.0) > 0.0)) {
    throw BoundaryViolatedAtZero("boundary " + to_descriptor(boundary) +
                                 " is not positive at t = 0");
  }
  const auto table = tabulate_boundary(boundary, grid.dt(), grid.steps());
  return first_crossing_index(path, table);
}

// ---------------------------------------------------------------------------

SurvivalRecorder::SurvivalRecorder(const SimulationGrid& grid, std::vector<BoundarySpec> boundaries,
                                   MonitoringMode mode, std::vector<double> horizons,
                                   std::uint64_t n_paths)
    : grid_(grid), boundaries_(std::move(boundaries)), mode_(mode),
      horizons_(std::move(horizons)), n_paths_(n_paths) {
  if (boundaries_.empty()) throw InvalidArgument("persistence", "no boundary given");
  if (horizons_.empty()) throw InvalidArgument("persistence", "no horizon given");
  if (n_paths_ < 1) throw InvalidArgument("persistence", "n_paths must be at least 1");
  for (std::size_t j = 1; j < horizons_.size(); ++j) {
    if (!(horizons_[j] > horizons_[j - 1])) {
      throw InvalidArgument("persistence", "horizons must be strictly increasing");
    }
  }
  for (const auto& b : boundaries_) {
    auto checked = validate_spec(b);
    if (mode_ == MonitoringMode::Grid && !(eval_boundary(b, 0.0) > 0.0)) {
      throw BoundaryViolatedAtZero("boundary " + to_descriptor(b) + " is not positive at t = 0");
    }
    warnings_.push_back(std::move(checked.warnings));
  }

  if (mode_ == MonitoringMode::Grid) {
    stride_ = 1;
    for (double t : horizons_) {
      const auto idx = grid_.index_of(t);
      if (!idx || *idx == 0) {
        throw HorizonMisaligned("persistence", fmt::format("horizon {} is not a positive grid "
                                                           "point of [0, {}] with {} steps",
                                                           t, grid_.horizon(), grid_.steps()));
      }
      limits_.push_back(*idx);
    }
    scan_end_ = limits_.back();
  } else {
    const auto per_unit = grid_.steps_per_unit_time();
    if (!per_unit) {
      throw HorizonMisaligned("persistence", "integer times are not grid points of this grid");
    }
    stride_ = *per_unit;
    for (double t : horizons_) {
      if (t < 1.0 || t != std::floor(t) || t > grid_.horizon()) {
        throw HorizonMisaligned("persistence",
                                fmt::format("horizon {} is not an integer in [1, {}]", t,
                                            grid_.horizon()));
      }
      limits_.push_back(static_cast<std::size_t>(t));
    }
    scan_end_ = limits_.back() * stride_;
  }
  for (const auto& b : boundaries_) tables_.push_back(tabulate_boundary(b, grid_.dt(), scan_end_));
  crossings_.assign(boundaries_.size() * n_paths_, kNoCrossing);
}

void SurvivalRecorder::operator()(std::uint64_t path_index, std::span<const double> path) {
  for (std::size_t b = 0; b < boundaries_.size(); ++b) {
    const double* f = tables_[b].data();
    std::uint32_t hit = kNoCrossing;
    for (std::size_t i = stride_; i <= scan_end_; i += stride_) {
      if (path[i] > f[i]) {
        hit = static_cast<std::uint32_t>(i / stride_);
        break;
      }
    }
    crossings_[b * n_paths_ + path_index] = hit;
  }
}

std::vector<SurvivalCurve> SurvivalRecorder::curves(HurstIndex hurst, std::uint64_t seed,
                                                    double ci_level) const {
  std::vector<SurvivalCurve> out;
  for (std::size_t b = 0; b < boundaries_.size(); ++b) {
    // survivors[j] = #{paths whose first crossing is after limits_[j]}
    std::vector<std::uint64_t> survivors(limits_.size(), 0);
    for (std::uint64_t p = 0; p < n_paths_; ++p) {
      const std::uint32_t c = crossings_[b * n_paths_ + p];
      for (std::size_t j = 0; j < limits_.size(); ++j) {
        if (c > limits_[j]) {
          ++survivors[j];
        } else {
          break;
        }
      }
    }
    SurvivalCurve curve{hurst, boundaries_[b], mode_, horizons_, {}, n_paths_, grid_.steps(),
                        grid_.horizon(), seed, warnings_[b]};
    for (std::uint64_t s : survivors) {
      curve.estimates.push_back(bernoulli_estimate(s, n_paths_, ci_level));
    }
    out.push_back(std::move(curve));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<SurvivalCurve> survival_curves(const PathSource& source,
                                           const std::vector<BoundarySpec>& boundaries,
                                           MonitoringMode mode, const std::vector<double>& horizons,
                                           std::uint64_t n_paths, Execution execution) {
  SurvivalRecorder recorder(source.grid(), boundaries, mode, horizons, n_paths);
  for_each_path(source, n_paths, execution, recorder);
  return recorder.curves(source.hurst(), source.seed());
}

SurvivalCurve survival_curve(HurstIndex hurst, const BoundarySpec& boundary, MonitoringMode mode,
                             const SimulationGrid& grid, const std::vector<double>& horizons,
                             std::uint64_t n_paths, std::uint64_t seed) {
  const CirculantSource source(hurst, grid, seed);
  return survival_curves(source, {boundary}, mode, horizons, n_paths).front();
}

namespace {

void require_dyadic_sweep(const std::vector<double>& horizons) {
  if (horizons.size() < 4) {
    throw InvalidArgument("persistence", "exponent fit needs at least 4 horizons");
  }
  for (double t : horizons) {
    const double octave = std::log2(t / horizons.front());
    if (std::abs(octave - std::round(octave)) > 1e-9) {
      throw InvalidArgument("persistence", fmt::format("horizon {} is not dyadic", t));
    }
  }
  if (horizons.back() / horizons.front() < 8.0 - 1e-9) {
    throw InvalidArgument("persistence", "exponent fit needs horizons spanning 3 octaves");
  }
}

}  // namespace

SurvivalExponent survival_exponent_from_curve(const SurvivalCurve& curve, bool with_log_correction) {
  require_dyadic_sweep(curve.horizons);
  std::vector<DesignPoint> points;
  for (std::size_t j = 0; j < curve.horizons.size(); ++j) {
    points.push_back({curve.horizons[j], curve.estimates[j]});
  }
  return {fit_power_law(points, with_log_correction), 1.0 - curve.hurst.value(), curve};
}

SurvivalExponent survival_exponent(HurstIndex hurst, const BoundarySpec& boundary,
                                   MonitoringMode mode, const SimulationGrid& grid,
                                   const std::vector<double>& horizons, std::uint64_t n_paths,
                                   std::uint64_t seed, bool with_log_correction) {
  require_dyadic_sweep(horizons);
  return survival_exponent_from_curve(
      survival_curve(hurst, boundary, mode, grid, horizons, n_paths, seed), with_log_correction);
}

std::vector<double> dyadic_horizons(double first, double last) {
  if (!(first > 0.0) || last < first) throw InvalidArgument("persistence", "bad dyadic range");
  std::vector<double> out;
  for (double t = first; t <= last * (1.0 + 1e-12); t *= 2.0) out.push_back(t);
  return out;
}

std::vector<RefinementPoint> refinement_sweep(HurstIndex hurst, const BoundarySpec& boundary,
                                              double horizon,
                                              const std::vector<std::size_t>& step_counts,
                                              std::uint64_t n_paths, std::uint64_t seed) {
  std::vector<RefinementPoint> out;
  for (std::size_t steps : step_counts) {
    const SimulationGrid grid(steps, horizon);
    const auto curve = survival_curve(hurst, boundary, MonitoringMode::Grid, grid, {horizon},
                                      n_paths, seed);
    out.push_back({steps, curve.estimates.front()});
  }
  return out;
}

void write_survival_csv(std::ostream& out, const std::vector<SurvivalCurve>& curves) {
  out << "hurst,boundary_descriptor,mode,T,p_hat,stderr,n_paths,grid_steps,seed\n";
  for (const auto& c : curves) {
    // The descriptor contains commas, so it is quoted.
    const std::string desc = "\"" + to_descriptor(c.boundary) + "\"";
    for (std::size_t j = 0; j < c.horizons.size(); ++j) {
      out << fmt::format("{},{},{},{},{},{},{},{},{}\n", c.hurst.value(), desc, to_string(c.mode),
                         c.horizons[j], c.estimates[j].point, c.estimates[j].std_error, c.n_paths,
                         c.grid_steps, c.seed);
    }
  }
}

}  // namespace fbmlab
