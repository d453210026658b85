#include "fbmlab/cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <utility>

#include "fbmlab/error.hpp"
#include "fbmlab/kernels.hpp"

namespace fbmlab {

namespace {

namespace fs = std::filesystem;

// Every configuration key, in echo order.
const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "experiment", "hurst",    "grid-log2", "horizon", "boundary",       "mode",
      "k",          "horizons", "epsilons",  "lambdas", "paths",          "seed",
      "output",     "variant",  "scaling",   "log-correction"};
  return keys;
}

// Keys a manifest carries beyond the configuration echo.
bool is_manifest_key(std::string_view key) {
  static const std::vector<std::string_view> exact = {
      "fbmlab_version", "method", "threads", "wall_clock_seconds", "target_theta",
      "target_laplace_exponent", "csv"};
  static const std::vector<std::string_view> prefixes = {"timing.", "fit.", "warning."};
  if (std::ranges::find(exact, key) != exact.end()) return true;
  return std::ranges::any_of(prefixes, [&](std::string_view p) { return key.starts_with(p); });
}

bool is_config_key(std::string_view key) {
  return std::ranges::find(config_keys(), key) != config_keys().end();
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() || !std::isfinite(v)) {
    throw ConfigError(key, fmt::format("'{}' is not a finite number", text));
  }
  return v;
}

std::uint64_t to_uint(const std::string& key, std::string_view text) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(key, fmt::format("'{}' is not a nonnegative integer", text));
  }
  return v;
}

std::vector<double> to_list(const std::string& key, std::string_view text) {
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    out.push_back(to_double(key, text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (out.empty()) throw ConfigError(key, "empty list");
  return out;
}

bool to_bool(const std::string& key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(key, fmt::format("'{}' is not a boolean", text));
}

void require_increasing(const std::string& key, const std::vector<double>& v, bool decreasing) {
  for (std::size_t j = 1; j < v.size(); ++j) {
    if (decreasing ? !(v[j] < v[j - 1]) : !(v[j] > v[j - 1])) {
      throw ConfigError(key, decreasing ? "values must be strictly decreasing"
                                        : "values must be strictly increasing");
    }
  }
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t j = 0; j < v.size(); ++j) out += fmt::format("{}{}", j ? "," : "", v[j]);
  return out;
}

std::vector<double> default_dyadic(double first, double horizon) {
  if (horizon < first) return {horizon};
  return dyadic_horizons(first, horizon);
}

// Cross-field checks that would otherwise only surface mid-run.
void check_persist(const ExperimentConfig& c) {
  const auto grid = c.grid();
  const auto& b = *c.boundary;
  if (c.mode == MonitoringMode::Grid && !(eval_boundary(b, 0.0) > 0.0)) {
    throw ConfigError("boundary", "grid monitoring needs f(0) > 0");
  }
  for (double t : c.horizons) {
    if (!(t > 0.0) || t > c.horizon * (1.0 + 1e-12)) {
      throw ConfigError("horizons", fmt::format("{} is outside (0, {}]", t, c.horizon));
    }
    if (c.mode == MonitoringMode::Grid) {
      const auto idx = grid.index_of(t);
      if (!idx || *idx == 0) throw ConfigError("horizons", fmt::format("{} is not a grid point", t));
    } else if (t != std::floor(t) || !grid.steps_per_unit_time()) {
      throw ConfigError("horizons", fmt::format("{} is not a monitored integer time", t));
    }
  }
}

void check_current(const ExperimentConfig& c) {
  const auto grid = c.grid();
  for (double k : c.k) {
    if (!(k > 0.0)) throw ConfigError("k", "moment orders must be positive");
  }
  for (double t : c.horizons) {
    if (c.variant == CurrentVariant::ContinuousJT) {
      const auto idx = grid.index_of(t);
      if (!idx || *idx == 0) throw ConfigError("horizons", fmt::format("{} is not a grid point", t));
    } else if (t < 2.0 || t != std::floor(t) || t - 1.0 > c.horizon ||
               !grid.steps_per_unit_time()) {
      throw ConfigError("horizons", fmt::format("J_N needs integer N >= 2 with N - 1 <= {}",
                                                c.horizon));
    }
  }
}

void check_laplace(const ExperimentConfig& c) {
  for (double l : c.lambdas) {
    if (!(l >= 0.0)) throw ConfigError("lambdas", "lambdas must be nonnegative");
  }
  const auto grid = c.grid();
  if (c.scaling == LaplaceScaling::FixedGrid) {
    const auto one = grid.index_of(1.0);
    if (!one || *one == 0) throw ConfigError("horizon", "t = 1 must be a grid point");
  } else {
    const double needed = std::pow(c.lambdas.back(), 1.0 / c.hurst);
    if (needed > c.horizon * (1.0 + 1e-12)) {
      throw ConfigError("horizon", fmt::format("the largest lambda needs a horizon of {}", needed));
    }
  }
}

}  // namespace

std::string to_string(Experiment experiment) {
  switch (experiment) {
    case Experiment::Sample: return "sample";
    case Experiment::Persist: return "persist";
    case Experiment::Current: return "current";
    case Experiment::Functionals: return "functionals";
    case Experiment::Laplace: return "laplace";
    case Experiment::Oracle: return "oracle";
  }
  return "unknown";
}

Settings parse_settings_text(std::string_view text) {
  Settings out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(line), fmt::format("line {} is not key=value", line_no));
    }
    const std::string key(trim(line.substr(0, eq)));
    if (is_manifest_key(key)) continue;
    if (!is_config_key(key)) throw ConfigError(key, "unknown configuration key");
    out[key] = std::string(trim(line.substr(eq + 1)));
  }
  return out;
}

ExperimentConfig config_from_settings(const Settings& settings) {
  ExperimentConfig c;
  auto get = [&](const std::string& key) -> const std::string* {
    const auto it = settings.find(key);
    return it == settings.end() ? nullptr : &it->second;
  };
  for (const auto& [key, value] : settings) {
    if (!is_config_key(key)) throw ConfigError(key, "unknown configuration key");
  }

  if (auto v = get("experiment")) {
    static const std::vector<std::pair<std::string, Experiment>> names = {
        {"sample", Experiment::Sample},           {"persist", Experiment::Persist},
        {"current", Experiment::Current},         {"functionals", Experiment::Functionals},
        {"laplace", Experiment::Laplace},         {"oracle", Experiment::Oracle}};
    const auto it = std::ranges::find(names, *v, &std::pair<std::string, Experiment>::first);
    if (it == names.end()) throw ConfigError("experiment", fmt::format("unknown experiment '{}'", *v));
    c.experiment = it->second;
  }
  if (auto v = get("hurst")) {
    c.hurst = to_double("hurst", *v);
    if (!(c.hurst > 0.0 && c.hurst < 1.0)) {
      throw ConfigError("hurst", fmt::format("{} is outside (0, 1)", c.hurst));
    }
  }
  if (auto v = get("grid-log2")) {
    const auto g = to_uint("grid-log2", *v);
    if (g < 1 || g > 24) throw ConfigError("grid-log2", "must lie in [1, 24]");
    c.grid_log2 = static_cast<std::size_t>(g);
  }
  if (auto v = get("horizon")) {
    c.horizon = to_double("horizon", *v);
    if (!(c.horizon > 0.0)) throw ConfigError("horizon", "must be positive");
  }
  if (auto v = get("boundary")) {
    try {
      c.boundary = parse_boundary(*v);
    } catch (const Error& e) {
      throw ConfigError("boundary", e.what());
    }
  }
  if (auto v = get("mode")) {
    if (*v == "grid") {
      c.mode = MonitoringMode::Grid;
    } else if (*v == "integer") {
      c.mode = MonitoringMode::IntegerTimes;
    } else {
      throw ConfigError("mode", fmt::format("'{}' is neither grid nor integer", *v));
    }
  }
  if (auto v = get("k")) c.k = to_list("k", *v);
  if (auto v = get("horizons")) c.horizons = to_list("horizons", *v);
  if (auto v = get("epsilons")) c.epsilons = to_list("epsilons", *v);
  if (auto v = get("lambdas")) c.lambdas = to_list("lambdas", *v);
  if (auto v = get("paths")) {
    c.n_paths = to_uint("paths", *v);
    if (c.n_paths < 1) throw ConfigError("paths", "must be at least 1");
  }
  if (auto v = get("seed")) c.seed = to_uint("seed", *v);
  if (auto v = get("output")) {
    if (v->empty()) throw ConfigError("output", "empty path");
    c.output = *v;
  }
  if (auto v = get("variant")) {
    if (*v == "JT") {
      c.variant = CurrentVariant::ContinuousJT;
    } else if (*v == "JN") {
      c.variant = CurrentVariant::DiscreteJN;
    } else {
      throw ConfigError("variant", fmt::format("'{}' is neither JT nor JN", *v));
    }
  }
  if (auto v = get("scaling")) {
    if (*v == "grid") {
      c.scaling = LaplaceScaling::FixedGrid;
    } else if (*v == "self-similar") {
      c.scaling = LaplaceScaling::SelfSimilar;
    } else {
      throw ConfigError("scaling", fmt::format("'{}' is neither grid nor self-similar", *v));
    }
  }
  if (auto v = get("log-correction")) c.with_log_correction = to_bool("log-correction", *v);

  const auto out_dir = fs::path(c.output).parent_path();
  if (!out_dir.empty() && !fs::is_directory(out_dir)) {
    throw ConfigError("output", fmt::format("directory '{}' does not exist", out_dir.string()));
  }

  // Experiment-specific defaults and checks.
  const bool needs_mean = c.experiment == Experiment::Current ||
                          c.experiment == Experiment::Laplace;
  if (needs_mean && c.n_paths < 2) throw ConfigError("paths", "moment estimates need >= 2 paths");
  switch (c.experiment) {
    case Experiment::Sample: {
      const double values = static_cast<double>(c.n_paths) *
                            static_cast<double>((std::size_t{1} << c.grid_log2) + 1);
      if (values > static_cast<double>(1u << 26)) {
        throw ConfigError("paths", "sample output limited to 2^26 values");
      }
      break;
    }
    case Experiment::Persist:
      if (!c.boundary) c.boundary = BoundarySpec::constant(1.0);
      try {
        validate_spec(*c.boundary);
      } catch (const Error& e) {
        throw ConfigError("boundary", e.what());
      }
      if (c.horizons.empty()) c.horizons = default_dyadic(1.0, c.horizon);
      require_increasing("horizons", c.horizons, false);
      check_persist(c);
      break;
    case Experiment::Current:
      if (c.k.empty()) c.k = {1.0};
      if (c.horizons.empty()) {
        c.horizons = default_dyadic(c.variant == CurrentVariant::DiscreteJN ? 2.0 : 1.0,
                                    c.variant == CurrentVariant::DiscreteJN ? c.horizon + 1.0
                                                                            : c.horizon);
      }
      require_increasing("horizons", c.horizons, false);
      check_current(c);
      break;
    case Experiment::Functionals:
      if (c.horizon != 1.0) throw ConfigError("horizon", "functionals live on [0, 1]");
      if (c.epsilons.empty()) c.epsilons = {0.25, 0.125, 0.0625};
      try {
        check_epsilons(c.epsilons, c.grid());
      } catch (const Error& e) {
        throw ConfigError("epsilons", e.what());
      }
      break;
    case Experiment::Laplace:
      if (c.lambdas.empty()) c.lambdas = {1.0, 2.0, 4.0, 8.0, 16.0};
      require_increasing("lambdas", c.lambdas, false);
      check_laplace(c);
      break;
    case Experiment::Oracle:
      if (!c.boundary) c.boundary = BoundarySpec::constant(1.0);
      if (c.boundary->kind != BoundaryKind::Constant || !(c.boundary->level > 0.0)) {
        throw ConfigError("boundary", "the Brownian oracle needs a positive constant boundary");
      }
      if (c.horizons.empty()) c.horizons = {1.0, 4.0, 16.0};
      if (c.epsilons.empty()) c.epsilons = {0.25, 0.125, 0.0625};
      for (double t : c.horizons) {
        if (!(t > 0.0)) throw ConfigError("horizons", "must be positive");
      }
      for (double e : c.epsilons) {
        if (!(e >= 0.0 && e <= 1.0)) throw ConfigError("epsilons", "must lie in [0, 1]");
      }
      break;
  }
  return c;
}

ExperimentConfig parse_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest(args.begin(), args.end());
  std::optional<std::string> subcommand;
  if (!rest.empty() && !rest.front().starts_with("-")) {
    subcommand = rest.front();
    rest.erase(rest.begin());
  }

  CLI::App app("fbmlab");
  app.allow_extras();
  std::map<std::string, std::string> flag_values;
  std::map<std::string, CLI::Option*> flag_options;
  for (const auto& key : config_keys()) {
    if (key == "log-correction") continue;
    flag_options[key] = app.add_option("--" + key, flag_values[key]);
  }
  bool log_correction = false;
  auto* log_flag = app.add_flag("--log-correction", log_correction);
  std::string config_path;
  auto* config_opt = app.add_option("--config", config_path);

  // CLI11 parses the reversed vector form.
  std::vector<std::string> reversed(rest.rbegin(), rest.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw ConfigError("arguments", e.what());
  }
  for (const auto& extra : app.remaining()) {
    if (extra.starts_with("--")) {
      const auto eq = extra.find('=');
      throw ConfigError(extra.substr(2, eq == std::string::npos ? eq : eq - 2), "unknown flag");
    }
    throw ConfigError(extra, "unexpected argument");
  }

  Settings settings;
  if (config_opt->count() > 0) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw ConfigError("config", fmt::format("cannot read '{}'", config_path));
    std::ostringstream text;
    text << in.rdbuf();
    settings = parse_settings_text(text.str());
  }
  for (const auto& [key, opt] : flag_options) {
    if (opt->count() > 0) settings[key] = flag_values[key];
  }
  if (log_flag->count() > 0) settings["log-correction"] = log_correction ? "true" : "false";
  if (subcommand) {
    if (flag_options["experiment"]->count() > 0 && flag_values["experiment"] != *subcommand) {
      throw ConfigError("experiment", "subcommand and --experiment disagree");
    }
    settings["experiment"] = *subcommand;
  }
  return config_from_settings(settings);
}

std::string config_echo(const ExperimentConfig& c) {
  std::string out;
  auto line = [&](std::string_view key, const std::string& value) {
    out += fmt::format("{}={}\n", key, value);
  };
  line("experiment", to_string(c.experiment));
  line("hurst", fmt::format("{}", c.hurst));
  line("grid-log2", fmt::format("{}", c.grid_log2));
  line("horizon", fmt::format("{}", c.horizon));
  if (c.boundary) line("boundary", to_descriptor(*c.boundary));
  line("mode", to_string(c.mode));
  if (!c.k.empty()) line("k", join(c.k));
  if (!c.horizons.empty()) line("horizons", join(c.horizons));
  if (!c.epsilons.empty()) line("epsilons", join(c.epsilons));
  if (!c.lambdas.empty()) line("lambdas", join(c.lambdas));
  line("paths", fmt::format("{}", c.n_paths));
  line("seed", fmt::format("{}", c.seed));
  line("output", c.output);
  line("variant", to_string(c.variant));
  line("scaling", to_string(c.scaling));
  line("log-correction", c.with_log_correction ? "true" : "false");
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void write_atomically(const fs::path& target, const std::string& content) {
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.close();
    if (!f) throw Error("cli", fmt::format("cannot write '{}'", tmp.string()));
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cli", fmt::format("cannot rename onto '{}': {}", target.string(), ec.message()));
  }
}

class Manifest {
 public:
  void set(std::string key, std::string value) {
    lines_.emplace_back(std::move(key), std::move(value));
  }
  void set(std::string key, double value) { set(std::move(key), fmt::format("{}", value)); }
  void fit(const std::string& prefix, const ExponentFit& f) {
    set(prefix + ".theta", f.theta);
    set(prefix + ".theta_stderr", f.theta_stderr);
    if (f.log_correction) set(prefix + ".log_correction", *f.log_correction);
    set(prefix + ".residual_rms", f.residual_rms);
  }
  void warn(const std::string& text) { set(fmt::format("warning.{}", ++warnings_), text); }

  std::string text() const {
    std::string out;
    for (const auto& [k, v] : lines_) out += fmt::format("{}={}\n", k, v);
    return out;
  }

 private:
  std::vector<std::pair<std::string, std::string>> lines_;
  int warnings_ = 0;
};

// Fits are diagnostics; a curve that cannot be fitted (zero estimates, too
// few points) yields a warning rather than a failed run.
template <class Fit>
void try_fit(Manifest& m, const std::string& prefix, Fit&& fit) {
  try {
    m.fit(prefix, fit());
  } catch (const Error& e) {
    m.warn(fmt::format("{} skipped: {}", prefix, e.what()));
  }
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

RunResult run(const ExperimentConfig& config, std::ostream& log) {
  const auto start = Clock::now();
  const HurstIndex hurst(config.hurst);
  const double h = config.hurst;
  Manifest m;
  std::vector<std::pair<std::string, double>> timings;
  std::ostringstream csv;

  auto timed = [&](const std::string& stage, auto&& body) {
    const auto t0 = Clock::now();
    body();
    timings.emplace_back(stage, seconds_since(t0));
  };

  if (config.experiment == Experiment::Oracle) {
    timed("tables", [&] {
      csv << "oracle,x,value\n";
      log << fmt::format("Brownian survival P(max_[0,T] B <= {}):\n", config.boundary->level);
      for (double t : config.horizons) {
        const double v = bm_survival(config.boundary->level, t);
        csv << fmt::format("bm_survival,{},{}\n", t, v);
        log << fmt::format("  T = {:<10} {:.10f}\n", t, v);
      }
      log << "Arcsine law (2/pi) arcsin sqrt(eps):\n";
      for (double e : config.epsilons) {
        const double v = arcsine_cdf(e);
        csv << fmt::format("arcsine,{},{}\n", e, v);
        log << fmt::format("  eps = {:<8} {:.10f}\n", e, v);
      }
    });
  } else {
    const auto grid = config.grid();
    std::unique_ptr<CirculantSource> source;
    timed("setup", [&] { source = std::make_unique<CirculantSource>(hurst, grid, config.seed); });
    m.set("method", to_string(source->method()));

    switch (config.experiment) {
      case Experiment::Sample: {
        std::vector<double> values(config.n_paths * grid.points());
        auto store = [&](std::uint64_t p, std::span<const double> path) {
          std::ranges::copy(path, values.begin() + static_cast<std::ptrdiff_t>(p * grid.points()));
        };
        timed("simulate", [&] { for_each_path(*source, config.n_paths, Execution::Parallel, store); });
        timed("write", [&] {
          csv << "path,index,t,value\n";
          for (std::uint64_t p = 0; p < config.n_paths; ++p) {
            for (std::size_t i = 0; i < grid.points(); ++i) {
              csv << fmt::format("{},{},{},{}\n", p, i, grid.time(i),
                                 values[p * grid.points() + i]);
            }
          }
        });
        break;
      }
      case Experiment::Persist: {
        m.set("target_theta", 1.0 - h);
        SurvivalRecorder recorder(grid, {*config.boundary}, config.mode, config.horizons,
                                  config.n_paths);
        timed("simulate", [&] { for_each_path(*source, config.n_paths, Execution::Parallel, recorder); });
        const auto curves = recorder.curves(hurst, config.seed);
        for (const auto& w : curves.front().warnings) m.warn(w);
        write_survival_csv(csv, curves);
        try_fit(m, "fit", [&] {
          return survival_exponent_from_curve(curves.front(), config.with_log_correction).fit;
        });
        break;
      }
      case Experiment::Current: {
        m.set("target_theta", 1.0 - h);
        CurrentRecorder recorder(grid, config.variant, config.horizons, config.n_paths);
        timed("simulate", [&] { for_each_path(*source, config.n_paths, Execution::Parallel, recorder); });
        std::vector<CurrentMomentCurve> curves;
        for (double k : config.k) curves.push_back(recorder.curve(hurst, k, config.seed));
        write_current_csv(csv, curves);
        for (const auto& c : curves) {
          try_fit(m, fmt::format("fit.k{}", c.k),
                  [&] { return current_exponent(c, config.with_log_correction); });
        }
        break;
      }
      case Experiment::Functionals: {
        m.set("target_theta", 1.0 - h);
        FunctionalRecorder recorder(grid, config.n_paths);
        timed("simulate", [&] { for_each_path(*source, config.n_paths, Execution::Parallel, recorder); });
        std::vector<SmallValueCurve> curves;
        for (auto kind : {FunctionalKind::TauMax, FunctionalKind::LastZero,
                          FunctionalKind::PositiveMeasure}) {
          curves.push_back(recorder.curve(kind, config.epsilons, hurst, config.seed));
        }
        write_functional_csv(csv, curves);
        for (const auto& c : curves) {
          try_fit(m, "fit." + to_string(c.kind),
                  [&] { return small_value_exponent(c, config.with_log_correction); });
        }
        break;
      }
      case Experiment::Laplace: {
        m.set("target_theta", 1.0 - h);
        m.set("target_laplace_exponent", (1.0 - h) / h);
        MaximumRecorder recorder(grid, hurst, config.lambdas, config.scaling, config.n_paths);
        timed("simulate", [&] { for_each_path(*source, config.n_paths, Execution::Parallel, recorder); });
        const auto curve = recorder.curve(config.seed);
        write_laplace_csv(csv, {curve});
        try_fit(m, "fit", [&] { return laplace_exponent(curve, config.with_log_correction); });
        break;
      }
      case Experiment::Oracle: break;
    }
  }

  RunResult result{config.output, config.output + ".manifest"};
  write_atomically(result.csv_path, csv.str());

  std::string manifest = config_echo(config);
  manifest += fmt::format("fbmlab_version={}\n", FBMLAB_VERSION);
  manifest += fmt::format("threads={}\n", worker_threads());
  for (const auto& [stage, secs] : timings) manifest += fmt::format("timing.{}={}\n", stage, secs);
  manifest += fmt::format("wall_clock_seconds={}\n", seconds_since(start));
  manifest += m.text();
  write_atomically(result.manifest_path, manifest);
  return result;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    const auto config = parse_config(args);
    const auto result = run(config, out);
    out << fmt::format("wrote {} and {}\n", result.csv_path, result.manifest_path);
    return 0;
  } catch (const ConfigError& e) {
    err << "fbmlab: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "fbmlab: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace fbmlab
