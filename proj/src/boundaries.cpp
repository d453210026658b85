#include "fbmlab/boundaries.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <optional>

#include "fbmlab/error.hpp"

namespace fbmlab {

double eval_boundary(const BoundarySpec& spec, double t) {
  switch (spec.kind) {
    case BoundaryKind::Constant:
      return spec.level;
    case BoundaryKind::LogPowerDecreasing:
      return spec.y0 - spec.y1 * std::pow(std::log1p(t), spec.gamma);
    case BoundaryKind::LogPowerIncreasing:
      return spec.y0 + spec.y1 * std::pow(std::log1p(t), spec.gamma);
  }
  return spec.level;
}

std::vector<double> tabulate_boundary(const BoundarySpec& spec, double dt, std::size_t steps) {
  std::vector<double> f(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) f[i] = eval_boundary(spec, dt * static_cast<double>(i));
  return f;
}

CheckedBoundary validate_spec(const BoundarySpec& spec) {
  CheckedBoundary out{spec, {}};
  if (spec.kind == BoundaryKind::Constant) {
    if (!std::isfinite(spec.level)) throw InvalidBoundary("level must be finite");
    return out;
  }
  if (!(spec.y0 > 0.0) || !std::isfinite(spec.y0)) throw InvalidBoundary("y0 must be positive");
  if (!(spec.y1 > 0.0) || !std::isfinite(spec.y1)) throw InvalidBoundary("y1 must be positive");
  if (!(spec.gamma > 0.0) || !std::isfinite(spec.gamma)) {
    throw InvalidBoundary("gamma must be positive");
  }
  if (spec.kind == BoundaryKind::LogPowerDecreasing && spec.gamma < 1.0) {
    out.warnings.push_back(
        "decreasing boundary with gamma < 1: the T^-(1-H) upper bound is not guaranteed, "
        "only the log-corrected one");
  }
  return out;
}

namespace {

double parse_number(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw InvalidBoundary(fmt::format("cannot parse {} from '{}'", what, text));
  }
  return v;
}

}  // namespace

BoundarySpec parse_boundary(std::string_view descriptor) {
  const auto colon = descriptor.find(':');
  if (colon == std::string_view::npos) {
    throw InvalidBoundary(fmt::format("descriptor '{}' lacks a '<kind>:' prefix", descriptor));
  }
  const std::string_view kind = descriptor.substr(0, colon);
  std::string_view rest = descriptor.substr(colon + 1);

  if (kind == "const") return validate_spec(BoundarySpec::constant(parse_number(rest, "level"))).spec;

  if (kind != "logdec" && kind != "loginc") {
    throw InvalidBoundary(fmt::format("unknown boundary kind '{}'", kind));
  }
  std::optional<double> y0, y1, gamma;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidBoundary(fmt::format("expected key=value, got '{}'", item));
    }
    const std::string_view key = item.substr(0, eq);
    const double value = parse_number(item.substr(eq + 1), key);
    if (key == "y0") {
      y0 = value;
    } else if (key == "y1") {
      y1 = value;
    } else if (key == "gamma") {
      gamma = value;
    } else {
      throw InvalidBoundary(fmt::format("unknown boundary parameter '{}'", key));
    }
  }
  if (!y0 || !y1 || !gamma) throw InvalidBoundary("log-power boundary needs y0, y1 and gamma");
  const auto spec = kind == "logdec" ? BoundarySpec::log_decreasing(*y0, *y1, *gamma)
                                     : BoundarySpec::log_increasing(*y0, *y1, *gamma);
  return validate_spec(spec).spec;
}

std::string to_descriptor(const BoundarySpec& spec) {
  switch (spec.kind) {
    case BoundaryKind::Constant:
      return fmt::format("const:{}", spec.level);
    case BoundaryKind::LogPowerDecreasing:
      return fmt::format("logdec:y0={},y1={},gamma={}", spec.y0, spec.y1, spec.gamma);
    case BoundaryKind::LogPowerIncreasing:
      return fmt::format("loginc:y0={},y1={},gamma={}", spec.y0, spec.y1, spec.gamma);
  }
  return {};
}

}  // namespace fbmlab
