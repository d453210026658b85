#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace fbmlab {

struct EstimateWithCI {
  double point = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
  double ci_level = 0.95;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// Two-sided standard normal quantile z with P(|Z| <= z) = level.
double normal_two_sided_quantile(double level);

// point = successes / n, stderr = sqrt(p(1-p)/n), Wilson score interval.
EstimateWithCI bernoulli_estimate(std::uint64_t successes, std::uint64_t n, double ci_level = 0.95);

// Sample mean and its standard error; sums run in fixed chunk order with
// compensation, so the result is bit-deterministic for a given input order.
EstimateWithCI mean_estimate(std::span<const double> samples, double ci_level = 0.95);

struct DesignPoint {
  double x;
  EstimateWithCI estimate;
};

// log p = -theta log x + kappa log log x + b.
struct ExponentFit {
  double theta = 0.0;
  double theta_stderr = 0.0;
  std::optional<double> log_correction;
  std::optional<double> log_correction_stderr;
  double intercept = 0.0;
  double residual_rms = 0.0;  // of log-space residuals
  std::vector<DesignPoint> design_points;
};

// Weighted least squares in log space with weights 1 / (relative stderr)^2.
// Needs >= 3 points (>= 4 and all x >= 3 with the log correction), strictly
// increasing x, and strictly positive estimates (else NonpositiveEstimate).
// Points with zero stderr are treated as exact and get the largest weight.
ExponentFit fit_power_law(std::span<const DesignPoint> points, bool with_log_correction);

}  // namespace fbmlab
