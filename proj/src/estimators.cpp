#include "fbmlab/estimators.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <string>

#include "fbmlab/error.hpp"
#include "fbmlab/numeric.hpp"

namespace fbmlab {

double normal_two_sided_quantile(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw InvalidArgument("estimators", "confidence level must lie in (0, 1)");
  }
  return boost::math::quantile(boost::math::normal(), 0.5 * (1.0 + level));
}

EstimateWithCI bernoulli_estimate(std::uint64_t successes, std::uint64_t n, double ci_level) {
  if (n < 1) throw InvalidArgument("estimators", "Bernoulli estimate needs n >= 1");
  if (successes > n) throw InvalidArgument("estimators", "successes exceed trials");
  const double z = normal_two_sided_quantile(ci_level);
  const double nd = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nd;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nd;
  const double centre = (p + z2 / (2.0 * nd)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / nd + z2 / (4.0 * nd * nd));
  return {p, std::sqrt(p * (1.0 - p) / nd), n, ci_level,
          std::max(0.0, std::min(p, centre - half)), std::min(1.0, std::max(p, centre + half))};
}

EstimateWithCI mean_estimate(std::span<const double> samples, double ci_level) {
  if (samples.size() < 2) throw InvalidArgument("estimators", "mean estimate needs n >= 2");
  const double nd = static_cast<double>(samples.size());
  const double mean = fixed_order_sum(samples) / nd;
  std::vector<double> sq(samples.size());
  std::ranges::transform(samples, sq.begin(), [mean](double x) { return (x - mean) * (x - mean); });
  const double var = fixed_order_sum(sq) / (nd - 1.0);
  const double se = std::sqrt(var / nd);
  const double z = normal_two_sided_quantile(ci_level);
  return {mean, se, samples.size(), ci_level, mean - z * se, mean + z * se};
}

ExponentFit fit_power_law(std::span<const DesignPoint> points, bool with_log_correction) {
  const std::size_t n = points.size();
  const std::size_t need = with_log_correction ? 4 : 3;
  if (n < need) {
    throw InvalidArgument("estimators", "power-law fit needs at least " + std::to_string(need) +
                                            " design points");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(points[i].estimate.point > 0.0)) {
      throw NonpositiveEstimate("estimate at x = " + std::to_string(points[i].x) +
                                " is not positive; increase the number of paths");
    }
    if (!(points[i].x > 0.0)) throw InvalidArgument("estimators", "design x must be positive");
    if (i > 0 && !(points[i].x > points[i - 1].x)) {
      throw InvalidArgument("estimators", "design x must be strictly increasing");
    }
    if (with_log_correction && points[i].x < 3.0) {
      throw InvalidArgument("estimators", "log-corrected fit needs x >= 3 at every point");
    }
  }

  constexpr double kExactRelativeError = 1e-8;
  const std::size_t k = with_log_correction ? 3 : 2;
  Eigen::MatrixXd a(n, k);
  Eigen::VectorXd y(n);
  Eigen::VectorXd sqrt_w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = points[i].estimate;
    const double rel = std::max(e.std_error / e.point, kExactRelativeError);
    sqrt_w(i) = 1.0 / rel;
    const double lx = std::log(points[i].x);
    a(i, 0) = -lx;
    a(i, 1) = 1.0;
    if (with_log_correction) a(i, 2) = std::log(lx);
    y(i) = std::log(e.point);
  }
  const Eigen::MatrixXd aw = sqrt_w.asDiagonal() * a;
  const Eigen::VectorXd yw = sqrt_w.asDiagonal() * y;
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(aw);
  if (qr.rank() < static_cast<Eigen::Index>(k)) {
    throw InvalidArgument("estimators", "degenerate design for power-law fit");
  }
  const Eigen::VectorXd beta = qr.solve(yw);
  const Eigen::MatrixXd cov = (aw.transpose() * aw).inverse();
  const Eigen::VectorXd resid = y - a * beta;

  ExponentFit fit;
  fit.theta = beta(0);
  fit.theta_stderr = std::sqrt(std::max(0.0, cov(0, 0)));
  fit.intercept = beta(1);
  if (with_log_correction) {
    fit.log_correction = beta(2);
    fit.log_correction_stderr = std::sqrt(std::max(0.0, cov(2, 2)));
  }
  fit.residual_rms = std::sqrt(resid.squaredNorm() / static_cast<double>(n));
  fit.design_points.assign(points.begin(), points.end());
  return fit;
}

}  // namespace fbmlab
