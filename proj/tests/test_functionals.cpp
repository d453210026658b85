#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "fbmlab/error.hpp"
#include "fbmlab/functionals.hpp"
#include "support.hpp"

using namespace fbmlab;

TEST_CASE("argmax") {
  const SimulationGrid two(2, 1.0);
  CHECK(compute_tau_max(std::vector<double>{0, 1, 0.5}, two) == 0.5);
  CHECK(compute_tau_max(std::vector<double>{0, 0, 0}, two) == 0.0);
  CHECK(compute_tau_max(std::vector<double>{0, 1, 1}, two) == 0.5);
  CHECK_THROWS_AS(compute_tau_max(std::vector<double>{0, 1, 0.5}, SimulationGrid(2, 2.0)),
                  HorizonMisaligned);
}

TEST_CASE("last zero") {
  const SimulationGrid three(3, 1.0);
  const double z = compute_last_zero(std::vector<double>{0, 1, -1, 2}, three);
  CHECK(z > 2.0 / 3.0);
  CHECK(z < 1.0);
  CHECK(z == doctest::Approx(7.0 / 9.0));
  CHECK(compute_last_zero(std::vector<double>{0, 1, 2, 3}, three) == 0.0);
  CHECK(compute_last_zero(std::vector<double>{0, -1, -2, -3}, three) == 0.0);
  // An exact zero counts as the crossing location.
  CHECK(compute_last_zero(std::vector<double>{0, 1, 0, 2}, three) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("positive measure") {
  const SimulationGrid four(4, 1.0);
  CHECK(compute_positive_measure(std::vector<double>{0, -1, -2, -1, -3}, four) == 0.0);
  CHECK(compute_positive_measure(std::vector<double>{0, 1, 2, 1, 3}, four) == 1.0);
  // Linear interpolation: [0,1] -> +, [1,-1] splits at the midpoint.
  CHECK(compute_positive_measure(std::vector<double>{0, 1, -1, -1, -1}, four) ==
        doctest::Approx(0.375));

  const SimulationGrid grid(64, 1.0);
  std::vector<double> half(grid.points());
  for (std::size_t i = 1; i < half.size(); ++i) half[i] = std::sin(2 * M_PI * grid.time(i));
  half[32] = 0.0;
  half[64] = 0.0;
  CHECK(std::abs(compute_positive_measure(half, grid) - 0.5) <= grid.dt());
}

TEST_CASE("brownian references") {
  CHECK(arcsine_cdf(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(arcsine_cdf(0.25) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(arcsine_cdf(0.0) == 0.0);
  CHECK(arcsine_cdf(1.0) == 1.0);
  CHECK(bm_survival(1.0, 1.0) == doctest::Approx(0.682689492137).epsilon(1e-11));
  CHECK(standard_normal_cdf(0.0) == 0.5);
  CHECK(standard_normal_cdf(-30.0) > 0.0);
}

TEST_CASE("pathwise implications of the negative tail") {
  const SimulationGrid grid(1024, 1.0);
  const CirculantSource source(HurstIndex(0.3), grid, 99);
  constexpr std::uint64_t n = 4000;
  FunctionalRecorder rec(grid, n);
  for_each_path(source, n, Execution::Parallel, rec);
  const std::vector<double> eps{0.5, 0.25, 0.125, 0.0625, 0.03125};
  for (double e : eps) {
    const auto idx = *grid.index_of(e);
    for (std::uint64_t p = 0; p < n; ++p) {
      if (rec.last_nonnegative(p) < idx) {
        CHECK(rec.value(FunctionalKind::LastZero, p) < e);
        CHECK(rec.value(FunctionalKind::PositiveMeasure, p) < e);
      }
    }
  }

  // Curves are CDFs: nonincreasing as eps shrinks, exactly.
  for (auto kind : {FunctionalKind::TauMax, FunctionalKind::LastZero, FunctionalKind::PositiveMeasure}) {
    const auto c = rec.curve(kind, eps, source.hurst(), source.seed());
    for (std::size_t j = 1; j < eps.size(); ++j) CHECK(c.estimates[j].point <= c.estimates[j - 1].point);
  }
  const auto tail = rec.negative_tail(eps);
  const auto lz = rec.curve(FunctionalKind::LastZero, eps, source.hurst(), source.seed());
  for (std::size_t j = 0; j < eps.size(); ++j) CHECK(tail[j].point <= lz.estimates[j].point);

  // The recorder matches the direct functions.
  const auto batch = sample_fbm_batch(source.hurst(), grid, 10, source.seed());
  for (std::uint64_t p = 0; p < 10; ++p) {
    CHECK(rec.value(FunctionalKind::TauMax, p) == compute_tau_max(batch.path(p), grid));
    CHECK(rec.value(FunctionalKind::LastZero, p) == compute_last_zero(batch.path(p), grid));
    CHECK(rec.value(FunctionalKind::PositiveMeasure, p) ==
          compute_positive_measure(batch.path(p), grid));
    CHECK(rec.last_nonnegative(p) == last_nonnegative_index(batch.path(p)));
  }
}

TEST_CASE("degenerate injected paths") {
  const SimulationGrid grid(256, 1.0);
  const auto up = testing::injected_batch(grid, 8, [](std::uint64_t p, double t) { return (p + 1) * t; });
  const BatchSource source(up);
  const auto curves = small_value_curves(source, {FunctionalKind::LastZero}, {0.5, 0.25, 0.125}, 8);
  for (const auto& e : curves.front().estimates) CHECK(e.point == 1.0);

  CHECK_THROWS_AS(small_value_curves(source, {FunctionalKind::LastZero}, {0.5, 0.015625}, 8),
                  EpsilonBelowResolution);
  CHECK_THROWS_AS(small_value_curves(source, {FunctionalKind::LastZero}, {0.3}, 8), InvalidArgument);
  CHECK_THROWS_AS(small_value_curves(source, {FunctionalKind::LastZero}, {0.25, 0.5}, 8),
                  InvalidArgument);
}

TEST_CASE("Brownian small values") {
  const SimulationGrid grid(1024, 1.0);
  constexpr std::uint64_t n = 20000;
  const CirculantSource source(HurstIndex(0.5), grid, 2);
  FunctionalRecorder rec(grid, n);
  for_each_path(source, n, Execution::Parallel, rec);
  const std::vector<double> eps{0.25, 0.125};
  const auto tau = rec.curve(FunctionalKind::TauMax, eps, source.hurst(), 2);
  const auto sp = rec.curve(FunctionalKind::PositiveMeasure, eps, source.hurst(), 2);
  const auto lz = rec.curve(FunctionalKind::LastZero, eps, source.hurst(), 2);
  for (const auto* c : {&tau, &sp, &lz}) {
    for (std::size_t j = 0; j < eps.size(); ++j) {
      CHECK(std::abs(c->estimates[j].point - arcsine_cdf(eps[j])) <
            4 * c->estimates[j].std_error + 0.01);
    }
  }

  // Symmetry: half of the paths without a late zero stay negative.
  const auto tail = rec.negative_tail(eps);
  for (std::size_t j = 0; j < eps.size(); ++j) {
    const double joint = std::hypot(tail[j].std_error, 0.5 * lz.estimates[j].std_error);
    CHECK(std::abs(tail[j].point - 0.5 * lz.estimates[j].point) < 5 * joint);
  }
}

TEST_CASE("time inversion: 1/z_minus and z_plus share a law") {
  const double hurst = 0.7;
  constexpr std::uint64_t n = 6000;
  const SimulationGrid unit(2048, 1.0);
  const CirculantSource a(HurstIndex(hurst), unit, 40);
  FunctionalRecorder rec(unit, n);
  for_each_path(a, n, Execution::Parallel, rec);

  const double s_max = 16.0;  // 1 / eps_min for eps_min = 1/16
  const SimulationGrid wide(8192, s_max);
  const CirculantSource b(HurstIndex(hurst), wide, 41);
  std::vector<double> zplus(n);
  auto first_zero = [&](std::uint64_t p, std::span<const double> path) {
    zplus[p] = compute_first_zero_after(path, wide, 1.0);
  };
  for_each_path(b, n, Execution::Parallel, first_zero);

  for (double q : {1.5, 2.0, 4.0, 8.0}) {
    std::uint64_t inv = 0, fwd = 0;
    for (std::uint64_t p = 0; p < n; ++p) {
      inv += rec.value(FunctionalKind::LastZero, p) < 1.0 / q ? 1 : 0;
      fwd += zplus[p] > q ? 1 : 0;
    }
    const auto ei = bernoulli_estimate(inv, n);
    const auto ef = bernoulli_estimate(fwd, n);
    CAPTURE(q);
    CHECK(std::abs(ei.point - ef.point) < 5 * std::hypot(ei.std_error, ef.std_error));
  }
}

TEST_CASE("Laplace transform of the maximum") {
  const SimulationGrid grid(256, 16.0);
  const std::vector<double> lambdas{0.0, 1.0, 2.0, 4.0};
  for (auto scaling : {LaplaceScaling::FixedGrid, LaplaceScaling::SelfSimilar}) {
    const auto c = laplace_transform_max(HurstIndex(0.5), grid, lambdas, 200, 6, scaling);
    CHECK(c.estimates[0].point == 1.0);
    for (std::size_t j = 1; j < lambdas.size(); ++j) {
      CHECK(c.estimates[j].point < c.estimates[j - 1].point);
      CHECK(c.estimates[j].point > 0.0);
    }
  }
  CHECK_THROWS_AS(laplace_transform_max(HurstIndex(0.5), grid, {1.0, 8.0}, 10, 1,
                                        LaplaceScaling::SelfSimilar),
                  HorizonMisaligned);
  CHECK_THROWS_AS(laplace_transform_max(HurstIndex(0.5), grid, {2.0, 1.0}, 10, 1), InvalidArgument);

  // Brownian reference: E exp(-lambda M_1) = 2 e^{lambda^2/2} (1 - Phi(lambda)).
  const SimulationGrid fine(4096, 64.0);
  const std::vector<double> ls{1.0, 2.0, 4.0};
  const auto c = laplace_transform_max(HurstIndex(0.5), fine, ls, 20000, 8, LaplaceScaling::SelfSimilar);
  for (std::size_t j = 0; j < ls.size(); ++j) {
    const double l = ls[j];
    const double exact = 2.0 * std::exp(0.5 * l * l) * standard_normal_cdf(-l);
    // Grid maximum underestimates the supremum, so the estimate sits above.
    CHECK(c.estimates[j].point > exact - 4 * c.estimates[j].std_error);
    CHECK(c.estimates[j].point < exact * 1.12);
  }
}

TEST_CASE("functional CSV") {
  const SimulationGrid grid(64, 1.0);
  const auto c = small_value_curve(HurstIndex(0.5), FunctionalKind::TauMax, grid, {0.5, 0.25}, 10, 3);
  std::ostringstream out;
  write_functional_csv(out, {c});
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "hurst,functional,epsilon_or_lambda,estimate,stderr,n_paths,grid_steps,seed");
  std::getline(in, line);
  CHECK(line.ends_with(",10,64,3"));
}
