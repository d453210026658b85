#pragma once

// Exact sampling of fractional Gaussian noise and fractional Brownian motion.
//
// The fast path is Davies-Harte circulant embedding: the Toeplitz covariance
// of unit-step fGn is embedded in a 2n circulant, diagonalised by the FFT, and
// each transform of scaled complex Gaussians yields two independent fGn
// vectors (real and imaginary parts). The Cholesky sampler factors the exact
// FBM covariance matrix and exists as a small-n cross-check.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fbmlab {

class HurstIndex {
 public:
  // Throws InvalidArgument unless 0 < value < 1.
  explicit HurstIndex(double value);

  double value() const noexcept { return value_; }
  double twice() const noexcept { return 2.0 * value_; }

  friend bool operator==(HurstIndex a, HurstIndex b) noexcept { return a.value_ == b.value_; }

 private:
  double value_;
};

// Uniform grid t_i = i * dt, i = 0..steps, on [0, horizon].
class SimulationGrid {
 public:
  SimulationGrid(std::size_t steps, double horizon);

  std::size_t steps() const noexcept { return steps_; }
  std::size_t points() const noexcept { return steps_ + 1; }
  double horizon() const noexcept { return horizon_; }
  double dt() const noexcept { return horizon_ / static_cast<double>(steps_); }
  double time(std::size_t i) const noexcept {
    return horizon_ * static_cast<double>(i) / static_cast<double>(steps_);
  }
  bool steps_power_of_two() const noexcept { return (steps_ & (steps_ - 1)) == 0; }

  // Index i with t_i == t (up to 1e-9 relative rounding), if t is a grid point.
  std::optional<std::size_t> index_of(double t) const noexcept;

  // Number of grid steps per unit time, if that is an integer (integer times
  // are then grid points).
  std::optional<std::size_t> steps_per_unit_time() const noexcept;

  friend bool operator==(const SimulationGrid&, const SimulationGrid&) = default;

 private:
  std::size_t steps_;
  double horizon_;
};

enum class SamplingMethod : std::uint8_t {
  CirculantEmbedding = 0,
  Cholesky = 1,
  Injected = 2,  // hand-built batches (tests, synthetic inputs)
};

std::string to_string(SamplingMethod method);

// Autocovariance of unit-step fGn, gamma(0..max_lag-1).
struct FgnCovariance {
  HurstIndex hurst;
  std::vector<double> lags;
};

// gamma(k) = (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}) / 2, evaluated without
// catastrophic cancellation for large k.
double fgn_lag_covariance(HurstIndex hurst, std::size_t k);
FgnCovariance fgn_autocovariance(HurstIndex hurst, std::size_t max_lag);

// E[X_s X_t] = (|s|^{2H} + |t|^{2H} - |t-s|^{2H}) / 2.
double fbm_covariance(HurstIndex hurst, double s, double t);

// Eigenvalues of the 2n-circulant with first row
// [g(0), ..., g(n-1), g(n), g(n-1), ..., g(1)]. Values within
// 1e-10 * max of zero from below are clamped to 0; anything more negative
// throws EmbeddingNotPSD. Requires n a power of two and n+1 lags.
std::vector<double> circulant_eigenvalues(const FgnCovariance& cov, std::size_t n);

// Increments of a batch, n_paths x steps, row-major.
struct FgnBatch {
  SimulationGrid grid;
  HurstIndex hurst;
  std::uint64_t n_paths;
  std::vector<double> increments;
  std::uint64_t seed;
  SamplingMethod method;

  std::span<const double> row(std::uint64_t i) const {
    return {increments.data() + i * grid.steps(), grid.steps()};
  }
};

// FBM paths, n_paths x (steps + 1), row-major; every row starts at 0.
class PathBatch {
 public:
  PathBatch(SimulationGrid grid, HurstIndex hurst, std::uint64_t n_paths,
            std::vector<double> values, std::uint64_t seed, SamplingMethod method);

  const SimulationGrid& grid() const noexcept { return grid_; }
  HurstIndex hurst() const noexcept { return hurst_; }
  std::uint64_t n_paths() const noexcept { return n_paths_; }
  std::uint64_t seed() const noexcept { return seed_; }
  SamplingMethod method() const noexcept { return method_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> path(std::uint64_t i) const {
    return {values_.data() + i * grid_.points(), grid_.points()};
  }

  friend bool operator==(const PathBatch&, const PathBatch&) = default;

 private:
  SimulationGrid grid_;
  HurstIndex hurst_;
  std::uint64_t n_paths_;
  std::vector<double> values_;
  std::uint64_t seed_;
  SamplingMethod method_;
};

// Streams paths in pairs. Path p is always the same function of
// (source parameters, seed, p), independent of batch size and thread count.
class PathSource {
 public:
  struct Workspace {
    virtual ~Workspace() = default;
  };

  virtual ~PathSource() = default;

  virtual const SimulationGrid& grid() const noexcept = 0;
  virtual HurstIndex hurst() const noexcept = 0;
  virtual std::uint64_t seed() const noexcept = 0;
  virtual SamplingMethod method() const noexcept = 0;
  virtual std::unique_ptr<Workspace> make_workspace() const = 0;

  // Writes paths 2*pair and 2*pair + 1 (each grid().points() long).
  virtual void fill_pair(std::uint64_t pair, Workspace& ws, std::span<double> first,
                         std::span<double> second) const = 0;
};

class CirculantSource final : public PathSource {
 public:
  CirculantSource(HurstIndex hurst, SimulationGrid grid, std::uint64_t seed);
  ~CirculantSource() override;

  const SimulationGrid& grid() const noexcept override { return grid_; }
  HurstIndex hurst() const noexcept override { return hurst_; }
  std::uint64_t seed() const noexcept override { return seed_; }
  SamplingMethod method() const noexcept override { return SamplingMethod::CirculantEmbedding; }
  std::unique_ptr<Workspace> make_workspace() const override;

  void fill_pair(std::uint64_t pair, Workspace& ws, std::span<double> first,
                 std::span<double> second) const override;

  // fGn increments (already scaled by dt^H) of paths 2*pair, 2*pair + 1.
  void fill_increment_pair(std::uint64_t pair, Workspace& ws, std::span<double> first,
                           std::span<double> second) const;

  std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }

 private:
  struct Plan;

  HurstIndex hurst_;
  SimulationGrid grid_;
  std::uint64_t seed_;
  double scale_;
  std::vector<double> eigenvalues_;
  std::vector<double> weights_;  // sqrt(lambda_k / 2n)
  std::unique_ptr<Plan> plan_;
};

class CholeskySource final : public PathSource {
 public:
  static constexpr std::size_t kMaxSteps = 2048;

  CholeskySource(HurstIndex hurst, SimulationGrid grid, std::uint64_t seed);

  const SimulationGrid& grid() const noexcept override { return grid_; }
  HurstIndex hurst() const noexcept override { return hurst_; }
  std::uint64_t seed() const noexcept override { return seed_; }
  SamplingMethod method() const noexcept override { return SamplingMethod::Cholesky; }
  std::unique_ptr<Workspace> make_workspace() const override;

  void fill_pair(std::uint64_t pair, Workspace& ws, std::span<double> first,
                 std::span<double> second) const override;

 private:
  void fill_one(std::uint64_t index, std::span<double> z, std::span<double> out) const;

  HurstIndex hurst_;
  SimulationGrid grid_;
  std::uint64_t seed_;
  std::vector<double> lower_;  // row-major lower-triangular factor, steps x steps
};

// Serves the rows of an existing batch (injected or previously sampled).
class BatchSource final : public PathSource {
 public:
  explicit BatchSource(const PathBatch& batch) : batch_(batch) {}

  const SimulationGrid& grid() const noexcept override { return batch_.grid(); }
  HurstIndex hurst() const noexcept override { return batch_.hurst(); }
  std::uint64_t seed() const noexcept override { return batch_.seed(); }
  SamplingMethod method() const noexcept override { return batch_.method(); }
  std::unique_ptr<Workspace> make_workspace() const override;

  void fill_pair(std::uint64_t pair, Workspace& ws, std::span<double> first,
                 std::span<double> second) const override;

 private:
  const PathBatch& batch_;
};

void cumulate_increments(std::span<const double> increments, std::span<double> path);

FgnBatch sample_fgn_batch(HurstIndex hurst, SimulationGrid grid, std::uint64_t n_paths,
                          std::uint64_t seed);
PathBatch fgn_to_fbm(const FgnBatch& increments);
PathBatch sample_fbm_batch(HurstIndex hurst, SimulationGrid grid, std::uint64_t n_paths,
                           std::uint64_t seed);
PathBatch cholesky_sample(HurstIndex hurst, SimulationGrid grid, std::uint64_t n_paths,
                          std::uint64_t seed);

struct CovarianceEntry {
  std::size_t i;
  std::size_t j;
  double value;      // unbiased sample covariance of X_{t_i}, X_{t_j}
  double std_error;  // of the value
};

using IndexPairs = std::vector<std::pair<std::size_t, std::size_t>>;

std::vector<CovarianceEntry> empirical_covariance(const PathBatch& batch, const IndexPairs& pairs);

// Streaming form of empirical_covariance: keeps only the requested columns.
// Safe to call concurrently for distinct path indices.
class CovarianceRecorder {
 public:
  CovarianceRecorder(const SimulationGrid& grid, IndexPairs pairs, std::uint64_t n_paths);

  void operator()(std::uint64_t path_index, std::span<const double> path);
  std::vector<CovarianceEntry> entries() const;

 private:
  IndexPairs pairs_;
  std::vector<std::size_t> columns_;
  std::vector<std::size_t> slot_i_;
  std::vector<std::size_t> slot_j_;
  std::uint64_t n_paths_;
  std::vector<double> values_;  // n_paths x columns
};

// Binary dump: "FBMB", u32 version, f64 H, u64 steps, f64 horizon, u64 n_paths,
// u64 seed, u8 method, then row-major f64 values. Little-endian throughout.
void write_path_batch(std::ostream& out, const PathBatch& batch);
PathBatch read_path_batch(std::istream& in);

}  // namespace fbmlab
