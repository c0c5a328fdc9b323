#include "aoa/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "aoa/bounds.hpp"
#include "aoa/geometry.hpp"

namespace aoa {

namespace {

constexpr double kAxisClearance = 1e-6;      // meters
constexpr double kElevationMargin = 1e-9;    // radians
constexpr std::uint64_t kScenarioStream = 0xFFFFFFFFULL;

void validate_common(const SweepConfig& config) {
  if (config.trials < 1) throw ConfigError("trials must be >= 1");
  if (config.sigma2_values.empty())
    throw ConfigError("sigma2 list must not be empty");
  for (double s2 : config.sigma2_values)
    if (!(s2 >= 0.0)) throw ConfigError("sigma2 values must be >= 0");
  if (config.m_values.empty()) throw ConfigError("m list must not be empty");
  for (int m : config.m_values)
    if (m < 2) throw InsufficientSensors("m values must be >= 2");
  if (!(config.half_width > 0.0))
    throw ConfigError("half_width must be > 0");
  if (!config.equal_variance && !(config.sigma2_elevation >= 0.0))
    throw ConfigError("sigma2_elevation must be >= 0");
  if (config.threads < 1) throw ConfigError("threads must be >= 1");
}

// Static block partition; results land in preallocated slots, so any thread
// count reproduces the sequential output.
template <typename Fn>
void parallel_trials(int trials, int threads, Fn&& body) {
  threads = std::min(threads, trials);
  if (threads <= 1) {
    for (int t = 0; t < trials; ++t) body(t);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const int chunk = (trials + threads - 1) / threads;
  for (int w = 0; w < threads; ++w) {
    const int lo = w * chunk;
    const int hi = std::min(trials, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (int t = lo; t < hi; ++t) body(t);
    });
  }
  for (auto& th : pool) th.join();
}

struct TrialOutcome {
  double squared_error = 0.0;
  int iterations = 0;
  bool ok = false;
};

NoiseSpec cell_noise(const SweepConfig& config, double sigma2) {
  NoiseSpec noise;
  noise.sigma2_azimuth = sigma2;
  noise.sigma2_elevation = config.equal_variance ? sigma2
                                                 : config.sigma2_elevation;
  return noise;
}

// MLE weights for a sweep cell. Exact measurements (both variances zero)
// keep the same minimizer under unit weights.
std::optional<NoiseSpec> mle_weights(const NoiseSpec& noise) {
  if (noise.sigma2_azimuth > 0.0 && noise.sigma2_elevation > 0.0) return noise;
  if (noise.sigma2_azimuth == 0.0 && noise.sigma2_elevation == 0.0)
    return NoiseSpec{1.0, 1.0};
  return std::nullopt;  // mixed zero/non-zero: no exact reweighting
}

}  // namespace

double to_decibels(double value) {
  if (std::isnan(value)) return value;
  if (value == 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(value);
}

double from_decibels(double db) { return std::pow(10.0, db / 10.0); }

Scenario generate_scenario(const Point3& source, double half_width, int m,
                           Rng& rng) {
  if (m < 2) throw InsufficientSensors("a scenario requires M >= 2 UAVs");
  if (!(half_width > 0.0)) throw ConfigError("half_width must be > 0");
  Scenario scenario;
  scenario.source = source;
  scenario.uavs.reserve(m);
  while (static_cast<int>(scenario.uavs.size()) < m) {
    const Point3 uav =
        source + Point3(rng.uniform(-half_width, half_width),
                        rng.uniform(-half_width, half_width),
                        rng.uniform(-half_width, half_width));
    const Point3 d = uav - source;
    if (std::hypot(d.x(), d.y()) < kAxisClearance) continue;
    if (d.norm() < kAxisClearance) continue;
    scenario.uavs.push_back(uav);
  }
  return scenario;
}

AngleMeasurementSet sample_measurements(const Scenario& scenario,
                                        const NoiseSpec& noise, Rng& rng) {
  const double sd_theta = std::sqrt(noise.sigma2_azimuth);
  const double sd_phi = std::sqrt(noise.sigma2_elevation);
  constexpr double phi_limit = std::numbers::pi / 2.0 - kElevationMargin;
  AngleMeasurementSet measurements;
  measurements.reserve(scenario.uavs.size());
  for (const Point3& uav : scenario.uavs) {
    const AnglePair exact = true_angles(scenario.source, uav);
    const double theta = wrap_angle(exact.azimuth + rng.gaussian(sd_theta));
    const double phi = std::clamp(exact.elevation + rng.gaussian(sd_phi),
                                  -phi_limit, phi_limit);
    measurements.emplace_back(theta, phi);
  }
  return measurements;
}

double mse(const std::vector<Point3>& estimates, const Point3& truth) {
  if (estimates.empty()) throw EmptyInput("mse over an empty estimate list");
  double sum = 0.0;
  for (const Point3& e : estimates) sum += (e - truth).squaredNorm();
  return sum / static_cast<double>(estimates.size());
}

SweepResult run_sweep(const SweepConfig& config) {
  validate_common(config);
  if (config.estimators.empty())
    throw ConfigError("estimator list must not be empty");
  if (config.scenario_override && !config.fixed_scenario)
    throw ConfigError("scenario_override requires fixed_scenario");

  SweepResult result;
  result.master_seed = config.master_seed;
  const int n_estimators = static_cast<int>(config.estimators.size());
  const int trials = config.trials;

  for (std::size_t mi = 0; mi < config.m_values.size(); ++mi) {
    const int m = config.m_values[mi];

    std::optional<Scenario> fixed;
    if (config.scenario_override) {
      if (config.scenario_override->sensor_count() != m)
        throw ConfigError("scenario_override sensor count differs from m");
      fixed = *config.scenario_override;
    } else if (config.fixed_scenario) {
      Rng rng(derive_seed(config.master_seed, mi, kScenarioStream, 0));
      fixed = generate_scenario(config.source, config.half_width, m, rng);
    }

    for (std::size_t si = 0; si < config.sigma2_values.size(); ++si) {
      const double sigma2 = config.sigma2_values[si];
      const NoiseSpec noise = cell_noise(config, sigma2);
      const std::optional<NoiseSpec> weights = mle_weights(noise);
      const bool crlb_defined =
          noise.sigma2_azimuth > 0.0 && noise.sigma2_elevation > 0.0;

      std::vector<std::vector<TrialOutcome>> outcomes(
          n_estimators, std::vector<TrialOutcome>(trials));
      std::vector<double> crlb_traces(
          trials, std::numeric_limits<double>::quiet_NaN());

      parallel_trials(trials, config.threads, [&](int t) {
        Rng rng(derive_seed(config.master_seed, mi, si, t));
        const Scenario scenario =
            fixed ? *fixed
                  : generate_scenario(config.source, config.half_width, m, rng);
        const AngleMeasurementSet measurements =
            sample_measurements(scenario, noise, rng);

        PlaneSet planes;
        bool planes_ok = true;
        try {
          planes = build_plane_set(measurements, scenario.uavs);
        } catch (const Error&) {
          planes_ok = false;
        }

        std::optional<Point3> warm_start;
        if (planes_ok) {
          try {
            warm_start = msd_ls_estimate(planes).position;
          } catch (const Error&) {
          }
        }

        if (crlb_defined) {
          try {
            crlb_traces[t] = crlb(scenario.source, scenario.uavs, noise).trace;
          } catch (const Error&) {
          }
        } else {
          crlb_traces[t] = 0.0;  // exact measurements: zero lower bound
        }

        for (int e = 0; e < n_estimators; ++e) {
          TrialOutcome& out = outcomes[e][t];
          try {
            EstimateReport report;
            switch (config.estimators[e]) {
              case EstimatorKind::Cis: {
                if (!planes_ok) throw RankDeficient("plane construction failed");
                CisOptions opts = config.cis_options;
                opts.cube_center = config.source;
                opts.cube_half_width = config.half_width;
                report = cis_estimate(planes, opts, rng);
                break;
              }
              case EstimatorKind::MsdLs:
                if (!planes_ok || !warm_start)
                  throw RankDeficient("plane system is rank deficient");
                report.position = *warm_start;
                break;
              case EstimatorKind::MsdTls:
                if (!planes_ok) throw RankDeficient("plane construction failed");
                report = msd_tls_estimate(planes);
                break;
              case EstimatorKind::ConventionalLs:
                report = conventional_ls_estimate(measurements, scenario.uavs);
                break;
              case EstimatorKind::Mle: {
                if (!warm_start)
                  throw RankDeficient("MLE initializer unavailable");
                if (!weights)
                  throw ZeroNoise("one angle variance is zero");
                report = mle_estimate(measurements, scenario.uavs, *weights,
                                      *warm_start, config.mle_max_iterations,
                                      config.mle_tolerance);
                break;
              }
            }
            out.squared_error =
                (report.position - scenario.source).squaredNorm();
            out.iterations = report.iterations_used;
            out.ok = true;
          } catch (const Error&) {
            out.ok = false;
          }
        }
      });

      // fixed-order reduction keeps the result independent of the schedule
      double crlb_sum = 0.0;
      int crlb_count = 0;
      for (int t = 0; t < trials; ++t) {
        if (!std::isnan(crlb_traces[t])) {
          crlb_sum += crlb_traces[t];
          ++crlb_count;
        }
      }
      const double crlb_mean =
          crlb_count > 0 ? crlb_sum / crlb_count
                         : std::numeric_limits<double>::quiet_NaN();

      for (int e = 0; e < n_estimators; ++e) {
        SweepCell cell;
        cell.estimator = estimator_name(config.estimators[e]);
        cell.sensors = m;
        cell.sigma2 = sigma2;
        cell.trials = trials;
        double se_sum = 0.0;
        double iter_sum = 0.0;
        for (int t = 0; t < trials; ++t) {
          const TrialOutcome& out = outcomes[e][t];
          if (!out.ok) {
            ++cell.failures;
            continue;
          }
          se_sum += out.squared_error;
          iter_sum += out.iterations;
          cell.squared_errors.push_back(out.squared_error);
        }
        const int successes = trials - cell.failures;
        cell.mse_m2 = successes > 0
                          ? se_sum / successes
                          : std::numeric_limits<double>::quiet_NaN();
        cell.mse_db = to_decibels(cell.mse_m2);
        cell.mean_iterations = successes > 0 ? iter_sum / successes : 0.0;
        cell.crlb_trace_m2 = crlb_mean;
        cell.crlb_trace_db = to_decibels(crlb_mean);
        result.cells.push_back(std::move(cell));
      }
    }
  }
  return result;
}

ConvergenceResult convergence_study(const SweepConfig& config,
                                    CisInit initializer, int k_max) {
  validate_common(config);
  if (config.m_values.size() != 1)
    throw ConfigError("convergence study uses exactly one m value");
  if (k_max < 0) throw ConfigError("k_max must be >= 0");
  const int m = config.m_values.front();
  const int trials = config.trials;

  ConvergenceResult result;
  result.master_seed = config.master_seed;

  std::optional<Scenario> fixed;
  if (config.scenario_override) {
    if (config.scenario_override->sensor_count() != m)
      throw ConfigError("scenario_override sensor count differs from m");
    fixed = *config.scenario_override;
  } else if (config.fixed_scenario) {
    Rng rng(derive_seed(config.master_seed, 0, kScenarioStream, 0));
    fixed = generate_scenario(config.source, config.half_width, m, rng);
  }

  for (std::size_t si = 0; si < config.sigma2_values.size(); ++si) {
    const double sigma2 = config.sigma2_values[si];
    const NoiseSpec noise = cell_noise(config, sigma2);

    // per trial, squared error of the iterate after k iterations
    std::vector<std::vector<double>> per_trial(
        trials, std::vector<double>());
    std::vector<bool> ok(trials, false);

    parallel_trials(trials, config.threads, [&](int t) {
      Rng rng(derive_seed(config.master_seed, 0, si, t));
      const Scenario scenario =
          fixed ? *fixed
                : generate_scenario(config.source, config.half_width, m, rng);
      const AngleMeasurementSet measurements =
          sample_measurements(scenario, noise, rng);
      try {
        const PlaneSet planes = build_plane_set(measurements, scenario.uavs);
        CisOptions opts = config.cis_options;
        opts.initializer = initializer;
        opts.cube_center = config.source;
        opts.cube_half_width = config.half_width;
        opts.max_iterations = k_max;
        opts.stop_on_tolerance = false;
        const EstimateReport report = cis_estimate(planes, opts, rng);
        per_trial[t].reserve(report.trace.size());
        for (const Point3& u : report.trace)
          per_trial[t].push_back((u - scenario.source).squaredNorm());
        ok[t] = true;
      } catch (const Error&) {
      }
    });

    for (int k = 0; k <= k_max; ++k) {
      ConvergenceCell cell;
      cell.sigma2 = sigma2;
      cell.iteration = k;
      cell.trials = trials;
      double sum = 0.0;
      int successes = 0;
      for (int t = 0; t < trials; ++t) {
        if (!ok[t]) continue;
        sum += per_trial[t][k];
        ++successes;
      }
      cell.failures = trials - successes;
      cell.mse_m2 = successes > 0 ? sum / successes
                                  : std::numeric_limits<double>::quiet_NaN();
      cell.mse_db = to_decibels(cell.mse_m2);
      result.cells.push_back(cell);
    }
  }
  return result;
}

}  // namespace aoa
