#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aoa/estimators.hpp"
#include "aoa/random.hpp"
#include "aoa/types.hpp"

namespace aoa {

/// 10 log10(x); -inf for x = 0. Used for both sigma^2 (rad^2) and MSE (m^2).
double to_decibels(double value);
double from_decibels(double db);

/// Draws M UAV positions i.i.d. uniform in the cube source +- half_width per
/// axis. Draws closer than 1e-6 m to the source's vertical axis (or to the
/// source itself) are rejected and redrawn.
Scenario generate_scenario(const Point3& source, double half_width, int m,
                           Rng& rng);

/// True angles plus additive Gaussian noise; azimuth wrapped into (-pi, pi],
/// elevation clamped to +-(pi/2 - 1e-9). Per sensor the azimuth deviate is
/// drawn before the elevation deviate.
AngleMeasurementSet sample_measurements(const Scenario& scenario,
                                        const NoiseSpec& noise, Rng& rng);

/// Mean squared position error (1/N) sum |u_hat - truth|^2.
double mse(const std::vector<Point3>& estimates, const Point3& truth);

struct SweepConfig {
  Point3 source = Point3::Zero();
  double half_width = 25.0;
  std::vector<int> m_values;
  std::vector<double> sigma2_values;  // rad^2 (azimuth; elevation when equal)
  int trials = 8000;
  std::uint64_t master_seed = 0;
  std::vector<EstimatorKind> estimators;
  bool equal_variance = true;
  double sigma2_elevation = 0.0;  // fixed elevation variance when not equal
  /// false: fresh scenario every trial; true: one scenario per M value,
  /// drawn from the master seed (or scenario_override when supplied).
  bool fixed_scenario = false;
  std::optional<Scenario> scenario_override;
  int threads = 1;
  CisOptions cis_options;  // cube re-centered on source/half_width per run
  int mle_max_iterations = 50;
  double mle_tolerance = 1e-9;
};

struct SweepCell {
  std::string estimator;
  int sensors = 0;      // M
  double sigma2 = 0.0;  // rad^2
  double mse_m2 = 0.0;
  double mse_db = 0.0;
  double crlb_trace_m2 = 0.0;
  double crlb_trace_db = 0.0;
  double mean_iterations = 0.0;
  int failures = 0;
  int trials = 0;
  /// Per successful trial, in trial order; kept for statistics (medians),
  /// not serialized.
  std::vector<double> squared_errors;
};

struct SweepResult {
  std::uint64_t master_seed = 0;
  std::vector<SweepCell> cells;
};

/// Runs every configured estimator over the (M, sigma^2) grid. Within a trial
/// all estimators see the same measurement set; each trial reseeds from
/// (master seed, M index, sigma^2 index, trial index), so the result is
/// bit-identical for any thread count. Estimator errors are counted per cell
/// and excluded from the MSE.
SweepResult run_sweep(const SweepConfig& config);

struct ConvergenceCell {
  double sigma2 = 0.0;
  int iteration = 0;  // k
  double mse_m2 = 0.0;
  double mse_db = 0.0;
  int failures = 0;
  int trials = 0;
};

struct ConvergenceResult {
  std::uint64_t master_seed = 0;
  std::vector<ConvergenceCell> cells;
};

/// MSE of the inscribed-sphere iterate after k = 0..k_max iterations (no
/// tolerance stop), per sigma^2 value. Uses the single M value of the config.
ConvergenceResult convergence_study(const SweepConfig& config,
                                    CisInit initializer, int k_max);

}  // namespace aoa
