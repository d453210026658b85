#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "fbmlab/error.hpp"
#include "fbmlab/functionals.hpp"
#include "fbmlab/persistence.hpp"
#include "support.hpp"

using namespace fbmlab;

TEST_CASE("first crossing examples") {
  const std::vector<double> zero(9, 0.0);
  const std::vector<double> one(9, 1.0);
  CHECK_FALSE(first_crossing_index(zero, one).has_value());

  std::vector<double> jump(9, 0.0);
  jump[1] = 2.0;
  CHECK(first_crossing_index(jump, one) == 1u);

  // Touching the boundary is survival; only a strict excess crosses.
  std::vector<double> touch(9, 1.0);
  touch[0] = 0.0;
  CHECK_FALSE(first_crossing_index(touch, one).has_value());
  touch[5] = std::nextafter(1.0, 2.0);
  CHECK(first_crossing_index(touch, one) == 5u);

  const SimulationGrid grid(8, 1.0);
  CHECK_FALSE(first_crossing_index(zero, BoundarySpec::constant(1.0), grid).has_value());
  CHECK_THROWS_AS(first_crossing_index(zero, BoundarySpec::constant(0.0), grid),
                  BoundaryViolatedAtZero);
  CHECK_THROWS_AS(first_crossing_index(zero, BoundarySpec::constant(-1.0), grid),
                  BoundaryViolatedAtZero);
}

TEST_CASE("curves are nested and boundary-monotone pathwise") {
  const SimulationGrid grid(1024, 64.0);
  const CirculantSource source(HurstIndex(0.6), grid, 5);
  const std::vector<BoundarySpec> bounds{
      BoundarySpec::constant(0.5), BoundarySpec::constant(1.0), BoundarySpec::constant(2.0),
      BoundarySpec::log_decreasing(1.0, 0.2, 1.0), BoundarySpec::log_increasing(1.0, 0.2, 1.0)};
  const auto horizons = dyadic_horizons(0.25, 64);
  constexpr std::uint64_t n = 4000;
  SurvivalRecorder rec(grid, bounds, MonitoringMode::Grid, horizons, n);
  for_each_path(source, n, Execution::Parallel, rec);
  const auto curves = rec.curves(source.hurst(), source.seed());

  for (const auto& c : curves) {
    for (std::size_t j = 1; j < c.estimates.size(); ++j) {
      CHECK(c.estimates[j].point <= c.estimates[j - 1].point);
    }
  }
  // const 0.5 <= const 1 <= const 2 and logdec <= const 1 <= loginc pointwise.
  auto below = [&](std::size_t tight, std::size_t loose) {
    for (std::uint64_t p = 0; p < n; ++p) {
      if (rec.crossing(tight, p) > rec.crossing(loose, p)) return false;
    }
    for (std::size_t j = 0; j < horizons.size(); ++j) {
      if (curves[tight].estimates[j].point > curves[loose].estimates[j].point) return false;
    }
    return true;
  };
  CHECK(below(0, 1));
  CHECK(below(1, 2));
  CHECK(below(3, 1));
  CHECK(below(1, 4));

  // The recorder agrees with the per-path function.
  const auto batch = sample_fbm_batch(source.hurst(), grid, 20, source.seed());
  for (std::uint64_t p = 0; p < 20; ++p) {
    const auto idx = first_crossing_index(batch.path(p), bounds[1], grid);
    CHECK(rec.crossing(1, p) == (idx ? static_cast<std::uint32_t>(*idx) : SurvivalRecorder::kNoCrossing));
  }
}

TEST_CASE("integer monitoring only looks at integer times") {
  const SimulationGrid grid(16, 4.0);
  // Spike above the boundary between integers, below it at every integer.
  const auto batch = testing::injected_batch(grid, 2, [](std::uint64_t p, double t) {
    if (p == 1 && t == 3.0) return 5.0;
    return t == std::floor(t) ? 0.0 : 5.0;
  });
  const BatchSource source(batch);
  const auto grid_curve =
      survival_curves(source, {BoundarySpec::constant(1.0)}, MonitoringMode::Grid, {1, 2, 4}, 2).front();
  const auto int_curve = survival_curves(source, {BoundarySpec::constant(1.0)},
                                         MonitoringMode::IntegerTimes, {1, 2, 3, 4}, 2)
                             .front();
  for (const auto& e : grid_curve.estimates) CHECK(e.point == 0.0);
  CHECK(int_curve.estimates[0].point == 1.0);
  CHECK(int_curve.estimates[1].point == 1.0);
  CHECK(int_curve.estimates[2].point == 0.5);
  CHECK(int_curve.estimates[3].point == 0.5);

  CHECK_THROWS_AS(survival_curves(source, {BoundarySpec::constant(1.0)},
                                  MonitoringMode::IntegerTimes, {1.5}, 2),
                  HorizonMisaligned);
  CHECK_THROWS_AS(survival_curves(source, {BoundarySpec::constant(1.0)}, MonitoringMode::Grid,
                                  {0.3}, 2),
                  HorizonMisaligned);
  CHECK_THROWS_AS(survival_curves(source, {BoundarySpec::constant(0.0)}, MonitoringMode::Grid,
                                  {1.0}, 2),
                  BoundaryViolatedAtZero);
}

TEST_CASE("Brownian survival against the reflection principle") {
  // Discrete monitoring at spacing dt shifts the effective level up by
  // beta * sqrt(dt), beta = -zeta(1/2)/sqrt(2 pi) (Broadie-Glasserman).
  constexpr double beta = 0.5825971579390106;
  const SimulationGrid grid(4096, 4.0);
  constexpr std::uint64_t n = 40000;
  const auto curve = survival_curve(HurstIndex(0.5), BoundarySpec::constant(1.0),
                                    MonitoringMode::Grid, grid, {1.0, 4.0}, n, 77);
  const double shifted = 1.0 + beta * std::sqrt(grid.dt());
  for (std::size_t j = 0; j < 2; ++j) {
    const double t = curve.horizons[j];
    const double expect = bm_survival(shifted, t);
    CAPTURE(t);
    CHECK(std::abs(curve.estimates[j].point - expect) < 4 * curve.estimates[j].std_error + 2e-3);
  }
  CHECK(bm_survival(1.0, 1.0) == doctest::Approx(0.682689492).epsilon(1e-9));
  CHECK(bm_survival(1.0, 4.0) == doctest::Approx(0.382924923).epsilon(1e-9));

  const auto far = survival_curve(HurstIndex(0.3), BoundarySpec::constant(1e6),
                                  MonitoringMode::Grid, SimulationGrid(64, 1.0), {1.0}, 500, 1);
  CHECK(far.estimates.front().point == 1.0);
}

TEST_CASE("exponent fit and refinement sweep") {
  const auto ex = survival_exponent(HurstIndex(0.5), BoundarySpec::constant(1.0),
                                    MonitoringMode::Grid, SimulationGrid(4096, 256.0),
                                    dyadic_horizons(16, 256), 20000, 3, false);
  CHECK(ex.target_theta == 0.5);
  CHECK(std::abs(ex.fit.theta - 0.5) < 0.1);

  const auto corrected = survival_exponent_from_curve(ex.curve, true);
  CHECK(corrected.fit.log_correction.has_value());
  CHECK(corrected.curve.estimates.size() == ex.curve.estimates.size());
}

TEST_CASE("refinement never raises survival beyond noise") {
  const auto sweep = refinement_sweep(HurstIndex(0.5), BoundarySpec::constant(1.0), 1.0,
                                      {64, 256, 1024}, 20000, 9);
  REQUIRE(sweep.size() == 3);
  for (std::size_t i = 1; i < sweep.size(); ++i) {
    const double noise = 3 * std::hypot(sweep[i].estimate.std_error, sweep[i - 1].estimate.std_error);
    CHECK(sweep[i].estimate.point <= sweep[i - 1].estimate.point + noise);
    CHECK(sweep[i].steps == 4 * sweep[i - 1].steps);
  }
}

TEST_CASE("dyadic sweep requirements and CSV") {
  CHECK(dyadic_horizons(1, 16) == std::vector<double>{1, 2, 4, 8, 16});
  const SimulationGrid grid(64, 16.0);
  CHECK_THROWS_AS(survival_exponent(HurstIndex(0.5), BoundarySpec::constant(1.0),
                                    MonitoringMode::Grid, grid, {1, 2, 4}, 10, 1, false),
                  InvalidArgument);
  CHECK_THROWS_AS(survival_exponent(HurstIndex(0.5), BoundarySpec::constant(1.0),
                                    MonitoringMode::Grid, grid, {1, 2, 3, 4, 8}, 10, 1, false),
                  InvalidArgument);

  const auto curve = survival_curve(HurstIndex(0.5), BoundarySpec::log_decreasing(1, 1, 1),
                                    MonitoringMode::Grid, grid, {1, 2}, 10, 4);
  std::ostringstream out;
  write_survival_csv(out, {curve});
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "hurst,boundary_descriptor,mode,T,p_hat,stderr,n_paths,grid_steps,seed");
  std::getline(in, line);
  CHECK(line.rfind("0.5,\"logdec:y0=1,y1=1,gamma=1\",grid,1,", 0) == 0);
  CHECK(line.ends_with(",10,64,4"));
}
