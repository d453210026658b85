#include "fbmlab/sampler.hpp"

#include <fftw3.h>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstring>
#include <istream>
#include <mutex>
#include <ostream>

#include "fbmlab/error.hpp"
#include "fbmlab/kernels.hpp"
#include "fbmlab/numeric.hpp"
#include "fbmlab/rng.hpp"

namespace fbmlab {

// ---------------------------------------------------------------------------
// Domain types

HurstIndex::HurstIndex(double value) : value_(value) {
  if (!(value > 0.0 && value < 1.0)) {
    throw InvalidArgument("sampler", "Hurst index must lie in (0, 1), got " + std::to_string(value));
  }
}

SimulationGrid::SimulationGrid(std::size_t steps, double horizon) : steps_(steps), horizon_(horizon) {
  if (steps < 2) throw InvalidArgument("sampler", "grid needs at least 2 steps");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw InvalidArgument("sampler", "grid horizon must be positive and finite");
  }
}

std::optional<std::size_t> SimulationGrid::index_of(double t) const noexcept {
  if (!(t >= 0.0)) return std::nullopt;
  const double r = t / dt();
  const double k = std::round(r);
  if (std::abs(r - k) > 1e-9 * std::max(1.0, r)) return std::nullopt;
  if (k > static_cast<double>(steps_)) return std::nullopt;
  return static_cast<std::size_t>(k);
}

std::optional<std::size_t> SimulationGrid::steps_per_unit_time() const noexcept {
  const double r = static_cast<double>(steps_) / horizon_;
  const double k = std::round(r);
  if (k < 1.0 || std::abs(r - k) > 1e-9 * r) return std::nullopt;
  return static_cast<std::size_t>(k);
}

std::string to_string(SamplingMethod method) {
  switch (method) {
    case SamplingMethod::CirculantEmbedding: return "circulant";
    case SamplingMethod::Cholesky: return "cholesky";
    case SamplingMethod::Injected: return "injected";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Covariances

double fgn_lag_covariance(HurstIndex hurst, std::size_t k) {
  if (k == 0) return 1.0;
  const double a = hurst.twice();
  if (a == 1.0) return 0.0;
  const double kd = static_cast<double>(k);
  if (k < 8) {
    return 0.5 * (std::pow(kd + 1.0, a) - 2.0 * std::pow(kd, a) + std::pow(kd - 1.0, a));
  }
  // (1+x)^a + (1-x)^a - 2 with x = 1/k, written as
  // 2 [ e^s 2 sinh^2(d/2) + expm1(s) ], s = (a/2) log1p(-x^2), d = a atanh(x).
  const double x = 1.0 / kd;
  const double s = 0.5 * a * std::log1p(-x * x);
  const double sh = std::sinh(0.5 * a * std::atanh(x));
  return std::pow(kd, a) * (2.0 * std::exp(s) * sh * sh + std::expm1(s));
}

FgnCovariance fgn_autocovariance(HurstIndex hurst, std::size_t max_lag) {
  if (max_lag < 1) throw InvalidArgument("sampler", "max_lag must be at least 1");
  FgnCovariance cov{hurst, std::vector<double>(max_lag)};
  for (std::size_t k = 0; k < max_lag; ++k) cov.lags[k] = fgn_lag_covariance(hurst, k);
  return cov;
}

double fbm_covariance(HurstIndex hurst, double s, double t) {
  const double a = hurst.twice();
  return 0.5 * (std::pow(std::abs(s), a) + std::pow(std::abs(t), a) - std::pow(std::abs(t - s), a));
}

// ---------------------------------------------------------------------------
// FFTW plumbing. The planner is not thread-safe; plans are created and
// destroyed under a lock and executed via the new-array interface.

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwDeleter {
  void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwDeleter>;

FftwBuffer make_buffer(std::size_t n) {
  auto* p = fftw_alloc_complex(n);
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer(p);
}

// In-place forward transform of length n. FFTW_ESTIMATE keeps the chosen
// algorithm (and hence the rounding) identical from run to run.
fftw_plan make_inplace_plan(std::size_t n) {
  std::lock_guard lock(planner_mutex());
  FftwBuffer scratch = make_buffer(n);
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), scratch.get(), scratch.get(),
                                    FFTW_FORWARD, FFTW_ESTIMATE);
  if (plan == nullptr) throw Error("sampler", "FFTW planning failed");
  return plan;
}

void destroy_plan(fftw_plan plan) {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

bool is_power_of_two(std::size_t n) { return n >= 1 && std::has_single_bit(n); }

}  // namespace

std::vector<double> circulant_eigenvalues(const FgnCovariance& cov, std::size_t n) {
  if (!is_power_of_two(n)) throw InvalidArgument("sampler", "embedding size must be a power of two");
  if (cov.lags.size() < n + 1) {
    throw InvalidArgument("sampler", "circulant embedding of size n needs n+1 covariance lags");
  }
  const std::size_t m = 2 * n;
  FftwBuffer buf = make_buffer(m);
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t lag = j <= n ? j : m - j;
    buf[j][0] = cov.lags[lag];
    buf[j][1] = 0.0;
  }
  fftw_plan plan = make_inplace_plan(m);
  fftw_execute_dft(plan, buf.get(), buf.get());
  destroy_plan(plan);

  std::vector<double> eig(m);
  double largest = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    eig[k] = buf[k][0];
    largest = std::max(largest, eig[k]);
  }
  const double tol = 1e-10 * largest;
  for (std::size_t k = 0; k < m; ++k) {
    if (eig[k] < -tol) {
      throw EmbeddingNotPSD("circulant eigenvalue " + std::to_string(k) + " = " +
                            std::to_string(eig[k]) + " below tolerance");
    }
    if (eig[k] < 0.0) eig[k] = 0.0;
  }
  return eig;
}

// ---------------------------------------------------------------------------
// Batches

PathBatch::PathBatch(SimulationGrid grid, HurstIndex hurst, std::uint64_t n_paths,
                     std::vector<double> values, std::uint64_t seed, SamplingMethod method)
    : grid_(grid), hurst_(hurst), n_paths_(n_paths), values_(std::move(values)), seed_(seed),
      method_(method) {
  if (n_paths_ < 1) throw InvalidArgument("sampler", "a path batch needs at least one path");
  if (values_.size() != n_paths_ * grid_.points()) {
    throw InvalidArgument("sampler", "path values do not match n_paths x (steps + 1)");
  }
  for (std::uint64_t i = 0; i < n_paths_; ++i) {
    if (values_[i * grid_.points()] != 0.0) {
      throw InvalidArgument("sampler", "path " + std::to_string(i) + " does not start at 0");
    }
  }
}

void cumulate_increments(std::span<const double> increments, std::span<double> path) {
  path[0] = 0.0;
  double x = 0.0;
  for (std::size_t i = 0; i < increments.size(); ++i) {
    x += increments[i];
    path[i + 1] = x;
  }
}

// ---------------------------------------------------------------------------
// Circulant embedding source

struct CirculantSource::Plan {
  explicit Plan(std::size_t m) : plan(make_inplace_plan(m)) {}
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  ~Plan() { destroy_plan(plan); }
  fftw_plan plan;
};

namespace {

struct CirculantWorkspace final : PathSource::Workspace {
  explicit CirculantWorkspace(std::size_t m, std::size_t steps)
      : buffer(make_buffer(m)), first(steps), second(steps) {}
  FftwBuffer buffer;
  std::vector<double> first;
  std::vector<double> second;
};

}  // namespace

CirculantSource::CirculantSource(HurstIndex hurst, SimulationGrid grid, std::uint64_t seed)
    : hurst_(hurst), grid_(grid), seed_(seed), scale_(std::pow(grid.dt(), hurst.value())) {
  if (!grid_.steps_power_of_two()) {
    throw InvalidArgument("sampler", "circulant embedding needs a power-of-two step count");
  }
  const std::size_t n = grid_.steps();
  eigenvalues_ = circulant_eigenvalues(fgn_autocovariance(hurst_, n + 1), n);
  weights_.resize(eigenvalues_.size());
  const double m = static_cast<double>(eigenvalues_.size());
  for (std::size_t k = 0; k < weights_.size(); ++k) weights_[k] = std::sqrt(eigenvalues_[k] / m);
  plan_ = std::make_unique<Plan>(eigenvalues_.size());
}

CirculantSource::~CirculantSource() = default;

std::unique_ptr<PathSource::Workspace> CirculantSource::make_workspace() const {
  return std::make_unique<CirculantWorkspace>(weights_.size(), grid_.steps());
}

void CirculantSource::fill_increment_pair(std::uint64_t pair, Workspace& ws,
                                          std::span<double> first,
                                          std::span<double> second) const {
  auto& w = static_cast<CirculantWorkspace&>(ws);
  fftw_complex* buf = w.buffer.get();
  const std::size_t m = weights_.size();
  NormalStream normals(seed_, pair, StreamDomain::Circulant);
  for (std::size_t k = 0; k < m; ++k) {
    const double re = normals.next();
    const double im = normals.next();
    buf[k][0] = weights_[k] * re;
    buf[k][1] = weights_[k] * im;
  }
  fftw_execute_dft(plan_->plan, buf, buf);
  const std::size_t n = grid_.steps();
  for (std::size_t i = 0; i < n; ++i) {
    first[i] = scale_ * buf[i][0];
    second[i] = scale_ * buf[i][1];
  }
}

void CirculantSource::fill_pair(std::uint64_t pair, Workspace& ws, std::span<double> first,
                                std::span<double> second) const {
  auto& w = static_cast<CirculantWorkspace&>(ws);
  fill_increment_pair(pair, ws, w.first, w.second);
  cumulate_increments(w.first, first);
  cumulate_increments(w.second, second);
}

// ---------------------------------------------------------------------------
// Cholesky source

namespace {

struct CholeskyWorkspace final : PathSource::Workspace {
  explicit CholeskyWorkspace(std::size_t n) : z(n) {}
  std::vector<double> z;
};

}  // namespace

CholeskySource::CholeskySource(HurstIndex hurst, SimulationGrid grid, std::uint64_t seed)
    : hurst_(hurst), grid_(grid), seed_(seed) {
  const std::size_t n = grid_.steps();
  if (n > kMaxSteps) {
    throw InvalidArgument("sampler", "Cholesky sampling is limited to " +
                                         std::to_string(kMaxSteps) + " steps");
  }
  Eigen::MatrixXd cov(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double c = fbm_covariance(hurst_, grid_.time(i + 1), grid_.time(j + 1));
      cov(i, j) = c;
      cov(j, i) = c;
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw FactorizationFailed("FBM covariance matrix is not numerically positive definite "
                              "(H = " + std::to_string(hurst_.value()) +
                              ", steps = " + std::to_string(n) + ")");
  }
  const Eigen::MatrixXd l = llt.matrixL();
  lower_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) lower_[i * n + j] = l(i, j);
  }
}

std::unique_ptr<PathSource::Workspace> CholeskySource::make_workspace() const {
  return std::make_unique<CholeskyWorkspace>(grid_.steps());
}

void CholeskySource::fill_one(std::uint64_t index, std::span<double> z,
                              std::span<double> out) const {
  NormalStream normals(seed_, index, StreamDomain::Cholesky);
  normals.fill(z);
  const std::size_t n = grid_.steps();
  out[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = lower_.data() + i * n;
    double acc = 0.0;
    for (std::size_t j = 0; j <= i; ++j) acc += row[j] * z[j];
    out[i + 1] = acc;
  }
}

void CholeskySource::fill_pair(std::uint64_t pair, Workspace& ws, std::span<double> first,
                               std::span<double> second) const {
  auto& w = static_cast<CholeskyWorkspace&>(ws);
  fill_one(2 * pair, w.z, first);
  fill_one(2 * pair + 1, w.z, second);
}

// ---------------------------------------------------------------------------
// Batch source

std::unique_ptr<PathSource::Workspace> BatchSource::make_workspace() const {
  return std::make_unique<Workspace>();
}

void BatchSource::fill_pair(std::uint64_t pair, Workspace&, std::span<double> first,
                            std::span<double> second) const {
  const std::uint64_t a = 2 * pair;
  if (a >= batch_.n_paths()) throw InvalidArgument("sampler", "batch source exhausted");
  std::ranges::copy(batch_.path(a), first.begin());
  if (a + 1 < batch_.n_paths()) {
    std::ranges::copy(batch_.path(a + 1), second.begin());
  } else {
    std::ranges::fill(second, 0.0);
  }
}

// ---------------------------------------------------------------------------
// Whole-batch sampling

FgnBatch sample_fgn_batch(HurstIndex hurst, SimulationGrid grid, std::uint64_t n_paths,
                          std::uint64_t seed) {
  if (n_paths < 1) throw InvalidArgument("sampler", "n_paths must be at least 1");
  const CirculantSource source(hurst, grid, seed);
  const std::size_t n = grid.steps();
  FgnBatch batch{grid, hurst, n_paths, std::vector<double>(n_paths * n), seed,
                 SamplingMethod::CirculantEmbedding};
  const std::uint64_t pairs = (n_paths + 1) / 2;

#pragma omp parallel num_threads(worker_threads())
  {
    auto ws = source.make_workspace();
    std::vector<double> spare(n);
#pragma omp for schedule(static)
    for (std::int64_t p = 0; p < static_cast<std::int64_t>(pairs); ++p) {
      const auto a = static_cast<std::uint64_t>(p) * 2;
      std::span<double> first(batch.increments.data() + a * n, n);
      std::span<double> second =
          a + 1 < n_paths ? std::span<double>(batch.increments.data() + (a + 1) * n, n)
                          : std::span<double>(spare);
      source.fill_increment_pair(static_cast<std::uint64_t>(p), *ws, first, second);
    }
  }
  return batch;
}

PathBatch fgn_to_fbm(const FgnBatch& increments) {
  const std::size_t n = increments.grid.steps();
  if (increments.increments.size() != increments.n_paths * n) {
    throw InvalidArgument("sampler", "increment batch has inconsistent size");
  }
  std::vector<double> values(increments.n_paths * (n + 1));
  for (std::uint64_t i = 0; i < increments.n_paths; ++i) {
    cumulate_increments(increments.row(i), std::span<double>(values.data() + i * (n + 1), n + 1));
  }
  return PathBatch(increments.grid, increments.hurst, increments.n_paths, std::move(values),
                   increments.seed, increments.method);
}

PathBatch sample_fbm_batch(HurstIndex hurst, SimulationGrid grid, std::uint64_t n_paths,
                           std::uint64_t seed) {
  return fgn_to_fbm(sample_fgn_batch(hurst, grid, n_paths, seed));
}

PathBatch cholesky_sample(HurstIndex hurst, SimulationGrid grid, std::uint64_t n_paths,
                          std::uint64_t seed) {
  if (n_paths < 1) throw InvalidArgument("sampler", "n_paths must be at least 1");
  const CholeskySource source(hurst, grid, seed);
  const std::size_t w = grid.points();
  std::vector<double> values(n_paths * w);
  const std::uint64_t pairs = (n_paths + 1) / 2;

#pragma omp parallel num_threads(worker_threads())
  {
    auto ws = source.make_workspace();
    std::vector<double> spare(w);
#pragma omp for schedule(static)
    for (std::int64_t p = 0; p < static_cast<std::int64_t>(pairs); ++p) {
      const auto a = static_cast<std::uint64_t>(p) * 2;
      std::span<double> first(values.data() + a * w, w);
      std::span<double> second = a + 1 < n_paths ? std::span<double>(values.data() + (a + 1) * w, w)
                                                 : std::span<double>(spare);
      source.fill_pair(static_cast<std::uint64_t>(p), *ws, first, second);
    }
  }
  return PathBatch(grid, hurst, n_paths, std::move(values), seed, SamplingMethod::Cholesky);
}

// ---------------------------------------------------------------------------
// Empirical covariance

namespace {

CovarianceEntry covariance_of_columns(std::size_t i, std::size_t j, std::span<const double> x,
                                      std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2) throw InvalidArgument("sampler", "covariance needs at least two paths");
  CompensatedSum sx, sy;
  for (std::size_t k = 0; k < n; ++k) {
    sx.add(x[k]);
    sy.add(y[k]);
  }
  const double mx = sx.value() / static_cast<double>(n);
  const double my = sy.value() / static_cast<double>(n);
  CompensatedSum sp;
  for (std::size_t k = 0; k < n; ++k) sp.add((x[k] - mx) * (y[k] - my));
  const double mean_product = sp.value() / static_cast<double>(n);
  CompensatedSum sv;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = (x[k] - mx) * (y[k] - my) - mean_product;
    sv.add(d * d);
  }
  const double nd = static_cast<double>(n);
  const double value = sp.value() / (nd - 1.0);
  const double se = std::sqrt(sv.value() / (nd - 1.0) / nd);
  return {i, j, value, se};
}

}  // namespace

std::vector<CovarianceEntry> empirical_covariance(const PathBatch& batch, const IndexPairs& pairs) {
  CovarianceRecorder recorder(batch.grid(), pairs, batch.n_paths());
  for (std::uint64_t p = 0; p < batch.n_paths(); ++p) recorder(p, batch.path(p));
  return recorder.entries();
}

CovarianceRecorder::CovarianceRecorder(const SimulationGrid& grid, IndexPairs pairs,
                                       std::uint64_t n_paths)
    : pairs_(std::move(pairs)), n_paths_(n_paths) {
  if (n_paths_ < 1) throw InvalidArgument("sampler", "covariance needs a nonempty batch");
  auto slot = [&](std::size_t idx) {
    if (idx >= grid.points()) throw InvalidArgument("sampler", "grid index out of range");
    auto it = std::ranges::find(columns_, idx);
    if (it != columns_.end()) return static_cast<std::size_t>(it - columns_.begin());
    columns_.push_back(idx);
    return columns_.size() - 1;
  };
  for (const auto& [i, j] : pairs_) {
    slot_i_.push_back(slot(i));
    slot_j_.push_back(slot(j));
  }
  values_.assign(n_paths_ * columns_.size(), 0.0);
}

void CovarianceRecorder::operator()(std::uint64_t path_index, std::span<const double> path) {
  double* row = values_.data() + path_index * columns_.size();
  for (std::size_t c = 0; c < columns_.size(); ++c) row[c] = path[columns_[c]];
}

std::vector<CovarianceEntry> CovarianceRecorder::entries() const {
  const std::size_t w = columns_.size();
  std::vector<double> x(n_paths_), y(n_paths_);
  std::vector<CovarianceEntry> out;
  out.reserve(pairs_.size());
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    for (std::uint64_t k = 0; k < n_paths_; ++k) {
      x[k] = values_[k * w + slot_i_[p]];
      y[k] = values_[k * w + slot_j_[p]];
    }
    out.push_back(covariance_of_columns(pairs_[p].first, pairs_[p].second, x, y));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Binary dump

namespace {

constexpr std::array<char, 4> kMagic = {'F', 'B', 'M', 'B'};
constexpr std::uint32_t kFormatVersion = 1;

template <class T>
void put_le(std::ostream& out, T value) {
  std::uint64_t bits = 0;
  if constexpr (std::is_floating_point_v<T>) {
    bits = std::bit_cast<std::uint64_t>(static_cast<double>(value));
  } else {
    bits = static_cast<std::uint64_t>(value);
  }
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t b = 0; b < sizeof(T); ++b) bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xff);
  out.write(bytes.data(), bytes.size());
}

template <class T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw Error("sampler", "truncated path batch file");
  std::uint64_t bits = 0;
  for (std::size_t b = 0; b < sizeof(T); ++b) bits |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
  if constexpr (std::is_floating_point_v<T>) {
    return std::bit_cast<double>(bits);
  } else {
    return static_cast<T>(bits);
  }
}

}  // namespace

void write_path_batch(std::ostream& out, const PathBatch& batch) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kFormatVersion);
  put_le<double>(out, batch.hurst().value());
  put_le<std::uint64_t>(out, batch.grid().steps());
  put_le<double>(out, batch.grid().horizon());
  put_le<std::uint64_t>(out, batch.n_paths());
  put_le<std::uint64_t>(out, batch.seed());
  put_le<std::uint8_t>(out, static_cast<std::uint8_t>(batch.method()));
  for (double v : batch.values()) put_le<double>(out, v);
  if (!out) throw Error("sampler", "failed writing path batch");
}

PathBatch read_path_batch(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw Error("sampler", "not an FBMB path batch");
  const auto version = get_le<std::uint32_t>(in);
  if (version != kFormatVersion) {
    throw Error("sampler", "unsupported FBMB version " + std::to_string(version));
  }
  const HurstIndex hurst(get_le<double>(in));
  const auto steps = get_le<std::uint64_t>(in);
  const double horizon = get_le<double>(in);
  const auto n_paths = get_le<std::uint64_t>(in);
  const auto seed = get_le<std::uint64_t>(in);
  const auto method = get_le<std::uint8_t>(in);
  if (method > static_cast<std::uint8_t>(SamplingMethod::Injected)) {
    throw Error("sampler", "unknown sampling method tag");
  }
  const SimulationGrid grid(steps, horizon);
  std::vector<double> values(n_paths * grid.points());
  for (double& v : values) v = get_le<double>(in);
  return PathBatch(grid, hurst, n_paths, std::move(values), seed,
                   static_cast<SamplingMethod>(method));
}

}  // namespace fbmlab
