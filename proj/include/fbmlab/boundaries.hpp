#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fbmlab {

enum class BoundaryKind { Constant, LogPowerDecreasing, LogPowerIncreasing };

// f(t) = level (Constant) or y0 -/+ y1 (log(1 + t))^gamma.
struct BoundarySpec {
  BoundaryKind kind = BoundaryKind::Constant;
  double level = 1.0;
  double y0 = 1.0;
  double y1 = 1.0;
  double gamma = 1.0;

  static BoundarySpec constant(double level) { return {BoundaryKind::Constant, level, 0, 0, 0}; }
  static BoundarySpec log_decreasing(double y0, double y1, double gamma) {
    return {BoundaryKind::LogPowerDecreasing, 0, y0, y1, gamma};
  }
  static BoundarySpec log_increasing(double y0, double y1, double gamma) {
    return {BoundaryKind::LogPowerIncreasing, 0, y0, y1, gamma};
  }

  friend bool operator==(const BoundarySpec&, const BoundarySpec&) = default;
};

double eval_boundary(const BoundarySpec& spec, double t);

// f at every grid point t_i = i * dt, i = 0..steps.
std::vector<double> tabulate_boundary(const BoundarySpec& spec, double dt, std::size_t steps);

struct CheckedBoundary {
  BoundarySpec spec;
  // Non-fatal notes, e.g. a decreasing boundary with gamma < 1 for which only
  // the weaker (log-corrected) upper bound is known.
  std::vector<std::string> warnings;
};

// Throws InvalidBoundary naming the violated constraint.
CheckedBoundary validate_spec(const BoundarySpec& spec);

// "const:<level>", "logdec:y0=<v>,y1=<v>,gamma=<v>", "loginc:y0=<v>,y1=<v>,gamma=<v>".
BoundarySpec parse_boundary(std::string_view descriptor);
std::string to_descriptor(const BoundarySpec& spec);

}  // namespace fbmlab
