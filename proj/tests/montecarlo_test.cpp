#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "aoa/geometry.hpp"
#include "aoa/io.hpp"
#include "aoa/montecarlo.hpp"
#include "support/oracles.hpp"

using aoa::Point3;
using doctest::Approx;

TEST_CASE("generate_scenario: count, bounds, clearance, determinism") {
  aoa::Rng rng(31);
  const Point3 source(3, -4, 5);
  const aoa::Scenario sc = aoa::generate_scenario(source, 25.0, 20, rng);
  CHECK(sc.sensor_count() == 20);
  for (const Point3& uav : sc.uavs) {
    const Point3 d = uav - source;
    CHECK(d.cwiseAbs().maxCoeff() <= 25.0);
    CHECK(std::hypot(d.x(), d.y()) >= 1e-6);
  }

  aoa::Rng a(77), b(77);
  const aoa::Scenario sa = aoa::generate_scenario(source, 25.0, 20, a);
  const aoa::Scenario sb = aoa::generate_scenario(source, 25.0, 20, b);
  for (int i = 0; i < 20; ++i) CHECK(sa.uavs[i] == sb.uavs[i]);

  aoa::Rng c(1);
  CHECK_THROWS_AS(aoa::generate_scenario(source, 25.0, 1, c),
                  aoa::InsufficientSensors);
  CHECK_THROWS_AS(aoa::generate_scenario(source, 0.0, 5, c), aoa::ConfigError);
}

TEST_CASE("sample_measurements: exact at zero noise, deterministic, calibrated") {
  aoa::Rng rng(32);
  const aoa::Scenario sc = aoa::generate_scenario(Point3::Zero(), 25, 10, rng);

  aoa::Rng r0(5);
  const auto exact = aoa::sample_measurements(sc, {0.0, 0.0}, r0);
  for (int i = 0; i < 10; ++i) {
    const aoa::AnglePair truth = aoa::true_angles(sc.source, sc.uavs[i]);
    CHECK(exact[i].azimuth == truth.azimuth);
    CHECK(exact[i].elevation == truth.elevation);
  }

  aoa::Rng r1(9), r2(9);
  const auto m1 = aoa::sample_measurements(sc, {1e-3, 1e-3}, r1);
  const auto m2 = aoa::sample_measurements(sc, {1e-3, 1e-3}, r2);
  for (int i = 0; i < 10; ++i) {
    CHECK(m1[i].azimuth == m2[i].azimuth);
    CHECK(m1[i].elevation == m2[i].elevation);
  }

  // law of large numbers: sample variance of 1e5 azimuth residuals
  const double s2 = 1e-4;
  aoa::Rng r3(13);
  double sum = 0.0, sum_sq = 0.0;
  int n = 0;
  for (int rep = 0; rep < 10000; ++rep) {
    const auto meas = aoa::sample_measurements(sc, {s2, s2}, r3);
    for (int i = 0; i < 10; ++i) {
      const double res = aoa::wrap_angle(
          meas[i].azimuth - aoa::true_angles(sc.source, sc.uavs[i]).azimuth);
      sum += res;
      sum_sq += res * res;
      ++n;
    }
  }
  const double var = sum_sq / n - (sum / n) * (sum / n);
  CHECK(var >= 0.9e-4);
  CHECK(var <= 1.1e-4);
}

TEST_CASE("mse: hand cases, empty input, synthetic covariance consistency") {
  const Point3 truth(1, 1, 1);
  CHECK(aoa::mse({truth, truth}, truth) == 0.0);
  CHECK(aoa::mse({truth + Point3(1, 0, 0), truth + Point3(0, 3, 0)}, truth) ==
        Approx(5.0));
  CHECK_THROWS_AS(aoa::mse({}, truth), aoa::EmptyInput);

  // Gaussian estimates with covariance C: MSE approaches trace(C)
  Eigen::Matrix3d c;
  c << 1.0, 0.2, 0.0,
       0.2, 2.0, -0.3,
       0.0, -0.3, 0.5;
  const Eigen::Matrix3d l = c.llt().matrixL();
  aoa::Rng rng(33);
  std::vector<Point3> estimates;
  estimates.reserve(8000);
  for (int i = 0; i < 8000; ++i) {
    const Point3 z(rng.gaussian(), rng.gaussian(), rng.gaussian());
    estimates.push_back(truth + l * z);
  }
  const double measured = aoa::mse(estimates, truth);
  CHECK(measured >= 0.95 * c.trace());
  CHECK(measured <= 1.05 * c.trace());
}

TEST_CASE("run_sweep: zero noise gives zero MSE for every estimator") {
  aoa::SweepConfig config;
  config.m_values = {6};
  config.sigma2_values = {0.0};
  config.trials = 1;
  config.master_seed = 3;
  config.estimators = {aoa::EstimatorKind::Cis, aoa::EstimatorKind::MsdLs,
                       aoa::EstimatorKind::MsdTls,
                       aoa::EstimatorKind::ConventionalLs,
                       aoa::EstimatorKind::Mle};
  const aoa::SweepResult result = aoa::run_sweep(config);
  CHECK(result.cells.size() == 5);
  for (const aoa::SweepCell& cell : result.cells) {
    CHECK(cell.failures == 0);
    CHECK(cell.mse_m2 <= 1e-16);
    CHECK(cell.crlb_trace_m2 == 0.0);
  }
}

TEST_CASE("run_sweep: thread count does not change a single byte") {
  aoa::SweepConfig config;
  config.m_values = {5, 10};
  config.sigma2_values = {aoa::from_decibels(-20.0), aoa::from_decibels(-10.0)};
  config.trials = 60;
  config.master_seed = 9001;
  config.estimators = {aoa::EstimatorKind::Cis, aoa::EstimatorKind::MsdLs,
                       aoa::EstimatorKind::Mle};

  config.threads = 1;
  const std::string csv1 = aoa::sweep_csv(aoa::run_sweep(config));
  config.threads = 2;
  const std::string csv2 = aoa::sweep_csv(aoa::run_sweep(config));
  config.threads = 7;
  const std::string csv7 = aoa::sweep_csv(aoa::run_sweep(config));
  CHECK(csv1 == csv2);
  CHECK(csv1 == csv7);
}

TEST_CASE("run_sweep: estimators are paired on identical measurements") {
  aoa::SweepConfig config;
  config.m_values = {8};
  config.sigma2_values = {aoa::from_decibels(-15.0)};
  config.trials = 40;
  config.master_seed = 55;
  config.estimators = {aoa::EstimatorKind::MsdLs};
  const aoa::SweepResult solo = aoa::run_sweep(config);

  config.estimators = {aoa::EstimatorKind::Cis, aoa::EstimatorKind::MsdLs,
                       aoa::EstimatorKind::Mle};
  const aoa::SweepResult joint = aoa::run_sweep(config);

  const aoa::SweepCell* joint_msd = nullptr;
  for (const auto& cell : joint.cells)
    if (cell.estimator == "msd-ls") joint_msd = &cell;
  REQUIRE(joint_msd != nullptr);
  CHECK(solo.cells[0].mse_m2 == joint_msd->mse_m2);
  CHECK(solo.cells[0].squared_errors == joint_msd->squared_errors);
}

TEST_CASE("run_sweep: per-trial failures are counted and excluded") {
  // UAV due +y of the source: measured azimuth is exactly pi/2 and the
  // tangent-form baseline fails every trial; the plane estimators do not
  aoa::Scenario degenerate;
  degenerate.source = Point3::Zero();
  degenerate.uavs = {Point3(0, 10, 3), Point3(6, 2, -1), Point3(-3, 5, 2)};

  aoa::SweepConfig config;
  config.m_values = {3};
  config.sigma2_values = {0.0};
  config.trials = 10;
  config.master_seed = 1;
  config.fixed_scenario = true;
  config.scenario_override = degenerate;
  config.estimators = {aoa::EstimatorKind::ConventionalLs,
                       aoa::EstimatorKind::MsdLs};
  const aoa::SweepResult result = aoa::run_sweep(config);
  REQUIRE(result.cells.size() == 2);
  CHECK(result.cells[0].estimator == "ls");
  CHECK(result.cells[0].failures == 10);
  CHECK(std::isnan(result.cells[0].mse_m2));
  CHECK(result.cells[1].failures == 0);
  CHECK(result.cells[1].mse_m2 <= 1e-16);
}

TEST_CASE("run_sweep: validation errors name the offending field") {
  aoa::SweepConfig config;
  config.m_values = {5};
  config.sigma2_values = {};
  config.trials = 1;
  config.estimators = {aoa::EstimatorKind::MsdLs};
  CHECK_THROWS_WITH_AS(aoa::run_sweep(config),
                       "ConfigError: sigma2 list must not be empty",
                       aoa::ConfigError);

  config.sigma2_values = {1e-3};
  config.m_values = {1};
  CHECK_THROWS_AS(aoa::run_sweep(config), aoa::InsufficientSensors);

  config.m_values = {5};
  config.estimators.clear();
  CHECK_THROWS_AS(aoa::run_sweep(config), aoa::ConfigError);
}

TEST_CASE("run_sweep: fixed scenario reuses one draw per M") {
  aoa::SweepConfig config;
  config.m_values = {6};
  config.sigma2_values = {aoa::from_decibels(-30.0),
                          aoa::from_decibels(-20.0)};
  config.trials = 30;
  config.master_seed = 777;
  config.fixed_scenario = true;
  config.estimators = {aoa::EstimatorKind::MsdLs};
  const aoa::SweepResult result = aoa::run_sweep(config);
  // identical geometry: the CRLB average equals the single-scenario trace
  CHECK(result.cells[0].crlb_trace_m2 / result.cells[1].crlb_trace_m2 ==
        Approx(0.1).epsilon(1e-9));  // trace scales linearly with sigma^2
}

TEST_CASE("convergence_study: shape, zero-noise floor, determinism") {
  aoa::SweepConfig config;
  config.m_values = {8};
  config.sigma2_values = {0.0, aoa::from_decibels(-20.0)};
  config.trials = 25;
  config.master_seed = 4242;

  const aoa::ConvergenceResult result =
      aoa::convergence_study(config, aoa::CisInit::WarmStartLs, 5);
  CHECK(result.cells.size() == 2 * 6);
  for (const auto& cell : result.cells) {
    CHECK(cell.trials == 25);
    CHECK(cell.failures == 0);
    if (cell.sigma2 == 0.0) CHECK(cell.mse_m2 <= 1e-16);
  }

  const aoa::ConvergenceResult again =
      aoa::convergence_study(config, aoa::CisInit::WarmStartLs, 5);
  CHECK(aoa::convergence_csv(result) == aoa::convergence_csv(again));

  config.threads = 3;
  const aoa::ConvergenceResult threaded =
      aoa::convergence_study(config, aoa::CisInit::WarmStartLs, 5);
  CHECK(aoa::convergence_csv(result) == aoa::convergence_csv(threaded));

  aoa::SweepConfig bad = config;
  bad.m_values = {8, 10};
  CHECK_THROWS_AS(aoa::convergence_study(bad, aoa::CisInit::WarmStartLs, 5),
                  aoa::ConfigError);
}

TEST_CASE("convergence_study: random init improves toward the warm-start level") {
  aoa::SweepConfig config;
  config.m_values = {20};
  config.sigma2_values = {aoa::from_decibels(-20.0)};
  config.trials = 300;
  config.master_seed = 31337;
  const aoa::ConvergenceResult random_init =
      aoa::convergence_study(config, aoa::CisInit::RandomInCube, 8);
  // MSE at k=0 reflects the uniform draw in the cube; it must shrink with k
  const auto& cells = random_init.cells;
  CHECK(cells.front().mse_db > cells.back().mse_db + 5.0);
  for (std::size_t i = 1; i < cells.size(); ++i)
    CHECK(cells[i].mse_m2 <= cells[i - 1].mse_m2 * (1.0 + 1e-9));
}

TEST_CASE("decibel helpers") {
  CHECK(aoa::to_decibels(1.0) == 0.0);
  CHECK(aoa::to_decibels(100.0) == Approx(20.0));
  CHECK(std::isinf(aoa::to_decibels(0.0)));
  CHECK(aoa::to_decibels(0.0) < 0.0);
  CHECK(aoa::from_decibels(-20.0) == Approx(0.01));
}
