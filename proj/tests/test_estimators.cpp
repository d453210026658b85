#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fbmlab/error.hpp"
#include "fbmlab/estimators.hpp"

using namespace fbmlab;

namespace {

DesignPoint exact_point(double x, double p) { return {x, {p, 0.0, 1000, 0.95, p, p}}; }

}  // namespace

TEST_CASE("bernoulli estimates") {
  const auto zero = bernoulli_estimate(0, 100);
  CHECK(zero.point == 0.0);
  CHECK(zero.std_error == 0.0);
  CHECK(zero.ci_low == 0.0);
  CHECK(zero.ci_high > 0.0);  // Wilson does not collapse at p = 0
  CHECK(zero.ci_high == doctest::Approx(0.036995).epsilon(1e-4));

  const auto half = bernoulli_estimate(50, 100);
  CHECK(half.point == 0.5);
  CHECK(half.std_error == doctest::Approx(0.05));
  CHECK(half.ci_low == doctest::Approx(0.5 - half.ci_high + 0.5));

  const auto small = bernoulli_estimate(1000, 1'000'000);
  CHECK(small.point == 1e-3);
  CHECK(small.std_error == doctest::Approx(3.1607e-5).epsilon(1e-4));

  for (std::uint64_t s : {0u, 1u, 3u, 17u, 99u, 100u}) {
    const auto e = bernoulli_estimate(s, 100, 0.99);
    CHECK(e.ci_low <= e.point);
    CHECK(e.point <= e.ci_high);
    CHECK(e.ci_low >= 0.0);
    CHECK(e.ci_high <= 1.0);
  }
  CHECK_THROWS_AS(bernoulli_estimate(0, 0), InvalidArgument);
  CHECK_THROWS_AS(bernoulli_estimate(5, 4), InvalidArgument);
  CHECK_THROWS_AS(bernoulli_estimate(1, 4, 1.0), InvalidArgument);
  CHECK_THROWS_AS(bernoulli_estimate(1, 4, 0.0), InvalidArgument);
}

TEST_CASE("normal quantile") {
  CHECK(normal_two_sided_quantile(0.95) == doctest::Approx(1.959963985).epsilon(1e-9));
  CHECK(normal_two_sided_quantile(0.6826894921) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("mean estimates") {
  const std::vector<double> xs{1, 2, 3, 4};
  const auto e = mean_estimate(xs);
  CHECK(e.point == 2.5);
  CHECK(e.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(e.ci_low < 2.5);
  CHECK(e.ci_high > 2.5);
  CHECK_THROWS_AS(mean_estimate(std::vector<double>{1.0}), InvalidArgument);

  std::mt19937_64 gen(7);
  std::normal_distribution<double> n01;
  std::vector<double> g(1'000'000);
  for (double& v : g) v = 3.0 + n01(gen);
  const auto m = mean_estimate(g);
  CHECK(std::abs(m.point - 3.0) < 0.005);
  CHECK(m.std_error == doctest::Approx(1e-3).epsilon(0.01));
}

TEST_CASE("power-law fit recovers exact inputs") {
  std::vector<DesignPoint> pts;
  for (double x : {4.0, 8.0, 16.0, 32.0, 64.0}) pts.push_back(exact_point(x, 2.0 * std::pow(x, -0.5)));
  const auto fit = fit_power_law(pts, false);
  CHECK(fit.theta == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(fit.intercept == doctest::Approx(std::log(2.0)).epsilon(1e-10));
  CHECK(fit.residual_rms < 1e-12);
  CHECK(!fit.log_correction);
  CHECK(fit.design_points.size() == pts.size());

  std::vector<DesignPoint> logged;
  for (double x : {4.0, 8.0, 16.0, 32.0, 64.0, 128.0}) {
    logged.push_back(exact_point(x, std::pow(x, -0.5) / std::log(x)));
  }
  const auto lf = fit_power_law(logged, true);
  CHECK(lf.theta == doctest::Approx(0.5).epsilon(1e-8));
  REQUIRE(lf.log_correction);
  CHECK(*lf.log_correction == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("weighted fit agrees with the closed-form normal equations") {
  std::mt19937_64 gen(11);
  std::normal_distribution<double> n01;
  std::vector<DesignPoint> pts;
  for (int j = 1; j <= 9; ++j) {
    const double x = std::pow(2.0, j);
    const double rel = 0.01 * j;
    const double p = std::pow(x, -0.25) * (1.0 + rel * n01(gen));
    pts.push_back({x, {p, rel * p, 1000, 0.95, p, p}});
  }
  // Minimise sum w (log p + theta log x - b)^2 by hand.
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& d : pts) {
    const double w = 1.0 / std::pow(d.estimate.std_error / d.estimate.point, 2);
    const double u = -std::log(d.x);
    const double y = std::log(d.estimate.point);
    sw += w;
    sx += w * u;
    sy += w * y;
    sxx += w * u * u;
    sxy += w * u * y;
  }
  const double det = sw * sxx - sx * sx;
  const double theta = (sw * sxy - sx * sy) / det;
  const double b = (sxx * sy - sx * sxy) / det;
  const double theta_se = std::sqrt(sw / det);

  const auto fit = fit_power_law(pts, false);
  CHECK(fit.theta == doctest::Approx(theta).epsilon(1e-10));
  CHECK(fit.intercept == doctest::Approx(b).epsilon(1e-10));
  CHECK(fit.theta_stderr == doctest::Approx(theta_se).epsilon(1e-8));
  CHECK(std::abs(fit.theta - 0.25) < 4 * fit.theta_stderr);
}

TEST_CASE("fit is invariant to rescaling the estimates") {
  std::vector<DesignPoint> a, b;
  for (int j = 2; j <= 7; ++j) {
    const double x = std::pow(2.0, j);
    const double p = std::pow(x, -0.3) * (1.0 + 0.02 * std::sin(j));
    a.push_back({x, {p, 0.05 * p, 10, 0.95, p, p}});
    b.push_back({x, {7 * p, 0.35 * p, 10, 0.95, p, p}});
  }
  const auto fa = fit_power_law(a, false);
  const auto fb = fit_power_law(b, false);
  CHECK(fa.theta == doctest::Approx(fb.theta).epsilon(1e-12));
  CHECK(fb.intercept - fa.intercept == doctest::Approx(std::log(7.0)));
  CHECK(fa.theta_stderr == doctest::Approx(fb.theta_stderr).epsilon(1e-12));
}

TEST_CASE("fit errors") {
  std::vector<DesignPoint> two{exact_point(2, 0.5), exact_point(4, 0.25)};
  CHECK_THROWS_AS(fit_power_law(two, false), InvalidArgument);

  std::vector<DesignPoint> zero{exact_point(2, 0.5), exact_point(4, 0.0), exact_point(8, 0.1)};
  CHECK_THROWS_AS(fit_power_law(zero, false), NonpositiveEstimate);

  std::vector<DesignPoint> unordered{exact_point(2, 0.5), exact_point(8, 0.2), exact_point(4, 0.3)};
  CHECK_THROWS_AS(fit_power_law(unordered, false), InvalidArgument);

  std::vector<DesignPoint> low{exact_point(2, 0.5), exact_point(4, 0.4), exact_point(8, 0.3),
                               exact_point(16, 0.2)};
  CHECK_THROWS_AS(fit_power_law(low, true), InvalidArgument);
  std::vector<DesignPoint> three{exact_point(4, 0.4), exact_point(8, 0.3), exact_point(16, 0.2)};
  CHECK_THROWS_AS(fit_power_law(three, true), InvalidArgument);
}
