// aoaloc: 3-D AOA source localization from azimuth/elevation bearings.
//
// Subcommands: simulate, estimate, crlb, bench, convergence. All randomness
// is seeded (default seed 0); rerunning a command reproduces its output
// byte for byte.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "aoa/bounds.hpp"
#include "aoa/estimators.hpp"
#include "aoa/geometry.hpp"
#include "aoa/io.hpp"
#include "aoa/montecarlo.hpp"

namespace {

using aoa::format_sig;

struct SimulateArgs {
  int m = 20;
  double half_width = 25.0;
  double sigma2_db = -20.0;
  std::optional<double> sigma2_phi_db;
  std::vector<double> source{0.0, 0.0, 0.0};
  std::uint64_t seed = 0;
  std::string scenario_out = "scenario.txt";
  std::string measurements_out = "measurements.txt";
  bool radians = false;
};

struct EstimateArgs {
  std::string scenario_path;
  std::string measurements_path;
  std::string estimator = "cis";
  bool radians = false;
  std::string format = "text";
  std::uint64_t seed = 0;
  std::string cis_init = "warm-start";
  int cis_max_iterations = 50;
  double cis_tolerance = 1e-6;
  std::string noise_model = "printed";
  std::vector<double> cube_center;  // 3 values when given
  std::optional<double> cube_half_width;
  std::optional<double> sigma2_db;
  std::optional<double> sigma2_phi_db;
  int mle_max_iterations = 50;
  double mle_tolerance = 1e-9;
};

struct CrlbArgs {
  std::string scenario_path;
  double sigma2_db = -20.0;
  std::optional<double> sigma2_phi_db;
  std::string format = "text";
};

struct RunArgs {
  std::string config_path;
  std::string out_csv;
  std::string out_json;
  int threads = 1;
};

aoa::AngleUnit unit_of(bool radians) {
  return radians ? aoa::AngleUnit::Radians : aoa::AngleUnit::Degrees;
}

int run_simulate(const SimulateArgs& args) {
  aoa::Rng rng(args.seed);
  const aoa::Point3 source(args.source[0], args.source[1], args.source[2]);
  const aoa::Scenario scenario =
      aoa::generate_scenario(source, args.half_width, args.m, rng);
  aoa::NoiseSpec noise;
  noise.sigma2_azimuth = aoa::from_decibels(args.sigma2_db);
  noise.sigma2_elevation = args.sigma2_phi_db
                               ? aoa::from_decibels(*args.sigma2_phi_db)
                               : noise.sigma2_azimuth;
  const aoa::AngleMeasurementSet measurements =
      aoa::sample_measurements(scenario, noise, rng);
  aoa::write_scenario_file(args.scenario_out, scenario);
  aoa::write_measurements_file(args.measurements_out, measurements,
                               unit_of(args.radians));
  std::cout << "wrote " << args.scenario_out << " (" << args.m << " UAVs) and "
            << args.measurements_out << '\n';
  return 0;
}

int run_estimate(const EstimateArgs& args) {
  const aoa::Scenario scenario = aoa::read_scenario_file(args.scenario_path);
  const aoa::AngleMeasurementSet measurements =
      aoa::read_measurements_file(args.measurements_path, unit_of(args.radians));
  const aoa::EstimatorKind kind = aoa::parse_estimator(args.estimator);

  aoa::EstimateReport report;
  switch (kind) {
    case aoa::EstimatorKind::Cis: {
      const aoa::PlaneSet planes =
          aoa::build_plane_set(measurements, scenario.uavs);
      aoa::CisOptions opts;
      opts.max_iterations = args.cis_max_iterations;
      opts.position_tolerance = args.cis_tolerance;
      if (args.cis_init == "warm-start") {
        opts.initializer = aoa::CisInit::WarmStartLs;
      } else if (args.cis_init == "random-cube") {
        opts.initializer = aoa::CisInit::RandomInCube;
      } else {
        throw aoa::ConfigError("--cis-init expects warm-start or random-cube");
      }
      if (args.noise_model == "printed") {
        opts.noise_model = aoa::NoiseVarianceModel::AsPublished;
      } else if (args.noise_model == "consistent") {
        opts.noise_model = aoa::NoiseVarianceModel::MeanAbsConsistent;
      } else {
        throw aoa::ConfigError("--noise-model expects printed or consistent");
      }
      // random-cube bounds default to the UAV bounding box
      aoa::Point3 lo = scenario.uavs.front(), hi = scenario.uavs.front();
      for (const aoa::Point3& u : scenario.uavs) {
        lo = lo.cwiseMin(u);
        hi = hi.cwiseMax(u);
      }
      opts.cube_center = 0.5 * (lo + hi);
      opts.cube_half_width = 0.5 * (hi - lo).maxCoeff();
      if (!args.cube_center.empty())
        opts.cube_center = aoa::Point3(args.cube_center[0],
                                       args.cube_center[1],
                                       args.cube_center[2]);
      if (args.cube_half_width) opts.cube_half_width = *args.cube_half_width;
      aoa::Rng rng(args.seed);
      report = aoa::cis_estimate(planes, opts, rng);
      break;
    }
    case aoa::EstimatorKind::MsdLs:
      report = aoa::msd_ls_estimate(
          aoa::build_plane_set(measurements, scenario.uavs));
      break;
    case aoa::EstimatorKind::MsdTls:
      report = aoa::msd_tls_estimate(
          aoa::build_plane_set(measurements, scenario.uavs));
      break;
    case aoa::EstimatorKind::ConventionalLs:
      report = aoa::conventional_ls_estimate(measurements, scenario.uavs);
      break;
    case aoa::EstimatorKind::Mle: {
      if (!args.sigma2_db)
        throw aoa::ConfigError("--sigma2-db is required for the MLE weighting");
      aoa::NoiseSpec noise;
      noise.sigma2_azimuth = aoa::from_decibels(*args.sigma2_db);
      noise.sigma2_elevation = args.sigma2_phi_db
                                   ? aoa::from_decibels(*args.sigma2_phi_db)
                                   : noise.sigma2_azimuth;
      const aoa::Point3 init =
          aoa::msd_ls_estimate(aoa::build_plane_set(measurements, scenario.uavs))
              .position;
      report = aoa::mle_estimate(measurements, scenario.uavs, noise, init,
                                 args.mle_max_iterations, args.mle_tolerance);
      break;
    }
  }

  if (args.format == "json") {
    nlohmann::ordered_json doc;
    doc["estimator"] = aoa::estimator_name(kind);
    doc["position"] = {aoa::round_sig(report.position.x()),
                       aoa::round_sig(report.position.y()),
                       aoa::round_sig(report.position.z())};
    if (report.radius) doc["radius"] = aoa::round_sig(*report.radius);
    if (report.sigma2_hat)
      doc["sigma2_hat"] = aoa::round_sig(*report.sigma2_hat);
    doc["iterations"] = report.iterations_used;
    doc["converged"] = report.converged;
    std::cout << doc.dump(2) << '\n';
  } else {
    std::cout << "estimator " << aoa::estimator_name(kind) << '\n';
    std::cout << "position " << format_sig(report.position.x()) << ' '
              << format_sig(report.position.y()) << ' '
              << format_sig(report.position.z()) << '\n';
    if (report.radius) std::cout << "radius " << format_sig(*report.radius) << '\n';
    if (report.sigma2_hat)
      std::cout << "sigma2_hat " << format_sig(*report.sigma2_hat) << '\n';
    std::cout << "iterations " << report.iterations_used << '\n';
    std::cout << "converged " << (report.converged ? "true" : "false") << '\n';
  }
  return 0;
}

int run_crlb(const CrlbArgs& args) {
  const aoa::Scenario scenario = aoa::read_scenario_file(args.scenario_path);
  aoa::NoiseSpec noise;
  noise.sigma2_azimuth = aoa::from_decibels(args.sigma2_db);
  noise.sigma2_elevation = args.sigma2_phi_db
                               ? aoa::from_decibels(*args.sigma2_phi_db)
                               : noise.sigma2_azimuth;
  const aoa::CrlbResult bound =
      aoa::crlb(scenario.source, scenario.uavs, noise);
  if (args.format == "json") {
    nlohmann::ordered_json doc;
    doc["bound_m2"] = nlohmann::ordered_json::array();
    for (int r = 0; r < 3; ++r)
      doc["bound_m2"].push_back({aoa::round_sig(bound.covariance(r, 0)),
                                 aoa::round_sig(bound.covariance(r, 1)),
                                 aoa::round_sig(bound.covariance(r, 2))});
    doc["trace_m2"] = aoa::round_sig(bound.trace);
    doc["trace_db"] = aoa::round_sig(aoa::to_decibels(bound.trace));
    std::cout << doc.dump(2) << '\n';
  } else {
    std::cout << "bound_m2\n";
    for (int r = 0; r < 3; ++r)
      std::cout << "  " << format_sig(bound.covariance(r, 0)) << ' '
                << format_sig(bound.covariance(r, 1)) << ' '
                << format_sig(bound.covariance(r, 2)) << '\n';
    std::cout << "trace_m2 " << format_sig(bound.trace) << '\n';
    std::cout << "trace_db " << format_sig(aoa::to_decibels(bound.trace))
              << '\n';
  }
  return 0;
}

int run_bench(const RunArgs& args) {
  aoa::ParsedSweepFile parsed = aoa::read_sweep_config(args.config_path);
  if (parsed.initializer || parsed.k_max)
    throw aoa::ConfigError(
        "fields 'initializer'/'k_max' are only valid for convergence");
  if (parsed.config.estimators.empty())
    throw aoa::ConfigError("field 'estimators' is missing or empty");
  parsed.config.threads = args.threads;
  const aoa::SweepResult result = aoa::run_sweep(parsed.config);
  aoa::write_text_file(args.out_csv, aoa::sweep_csv(result));
  aoa::write_text_file(args.out_json, aoa::sweep_json(result));
  for (const aoa::SweepCell& cell : result.cells)
    std::cout << cell.estimator << " M=" << cell.sensors
              << " sigma2=" << format_sig(aoa::to_decibels(cell.sigma2))
              << " dB: mse=" << format_sig(cell.mse_db)
              << " dB, crlb=" << format_sig(cell.crlb_trace_db)
              << " dB, mean_iters=" << format_sig(cell.mean_iterations)
              << ", failures=" << cell.failures << '/' << cell.trials << '\n';
  std::cout << "wrote " << args.out_csv << " and " << args.out_json << '\n';
  return 0;
}

int run_convergence(const RunArgs& args) {
  aoa::ParsedSweepFile parsed = aoa::read_sweep_config(args.config_path);
  parsed.config.threads = args.threads;
  const aoa::CisInit init =
      parsed.initializer.value_or(aoa::CisInit::WarmStartLs);
  const int k_max = parsed.k_max.value_or(10);
  const aoa::ConvergenceResult result =
      aoa::convergence_study(parsed.config, init, k_max);
  aoa::write_text_file(args.out_csv, aoa::convergence_csv(result));
  aoa::write_text_file(args.out_json, aoa::convergence_json(result));
  for (const aoa::ConvergenceCell& cell : result.cells)
    std::cout << "sigma2=" << format_sig(aoa::to_decibels(cell.sigma2))
              << " dB k=" << cell.iteration
              << ": mse=" << format_sig(cell.mse_db) << " dB, failures="
              << cell.failures << '/' << cell.trials << '\n';
  std::cout << "wrote " << args.out_csv << " and " << args.out_json << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"3-D AOA source localization: estimators, CRLB and Monte Carlo benchmarks"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand(
      "simulate", "Generate a random scenario and noisy measurements");
  simulate->add_option("--m", sim.m, "Number of UAVs (>= 2)")->required();
  simulate->add_option("--half-width", sim.half_width, "Cube half-width, m");
  simulate->add_option("--sigma2-db", sim.sigma2_db,
                       "Angle noise variance, dB rad^2")->required();
  simulate->add_option("--sigma2-phi-db", sim.sigma2_phi_db,
                       "Elevation variance when different, dB rad^2");
  simulate->add_option("--source", sim.source, "Source position x y z, m")
      ->expected(3);
  simulate->add_option("--seed", sim.seed, "Random seed (default 0)");
  simulate->add_option("--scenario-out", sim.scenario_out, "Scenario file");
  simulate->add_option("--measurements-out", sim.measurements_out,
                       "Measurements file");
  simulate->add_flag("--radians", sim.radians,
                     "Write angles in radians (default degrees)");

  EstimateArgs est;
  auto* estimate = app.add_subcommand(
      "estimate", "Run one estimator on scenario + measurements files");
  estimate->add_option("--scenario", est.scenario_path, "Scenario file")
      ->required();
  estimate->add_option("--measurements", est.measurements_path,
                       "Measurements file")->required();
  estimate->add_option("--estimator", est.estimator,
                       "cis | msd-ls | msd-tls | ls | mle")->required();
  estimate->add_flag("--radians", est.radians,
                     "Measurements are in radians (default degrees)");
  estimate->add_option("--format", est.format, "text | json");
  estimate->add_option("--seed", est.seed, "Seed for random-cube init");
  estimate->add_option("--cis-init", est.cis_init,
                       "warm-start | random-cube");
  estimate->add_option("--cis-max-iterations", est.cis_max_iterations,
                       "Iteration cap K");
  estimate->add_option("--cis-tolerance", est.cis_tolerance,
                       "Position tolerance, m");
  estimate->add_option("--noise-model", est.noise_model,
                       "printed | consistent (sigma2_hat variant)");
  estimate->add_option("--cube-center", est.cube_center,
                       "Init cube center x y z (default: UAV bounding box)")
      ->expected(3);
  estimate->add_option("--cube-half-width", est.cube_half_width,
                       "Init cube half-width, m");
  estimate->add_option("--sigma2-db", est.sigma2_db,
                       "Noise variance for MLE weighting, dB rad^2");
  estimate->add_option("--sigma2-phi-db", est.sigma2_phi_db,
                       "Elevation variance when different, dB rad^2");
  estimate->add_option("--mle-max-iterations", est.mle_max_iterations,
                       "Gauss-Newton iteration cap");
  estimate->add_option("--mle-tolerance", est.mle_tolerance,
                       "Gauss-Newton step tolerance, m");

  CrlbArgs crl;
  auto* crlb_cmd = app.add_subcommand(
      "crlb", "Print the position-error lower bound for a scenario");
  crlb_cmd->add_option("--scenario", crl.scenario_path, "Scenario file")
      ->required();
  crlb_cmd->add_option("--sigma2-db", crl.sigma2_db,
                       "Angle noise variance, dB rad^2")->required();
  crlb_cmd->add_option("--sigma2-phi-db", crl.sigma2_phi_db,
                       "Elevation variance when different, dB rad^2");
  crlb_cmd->add_option("--format", crl.format, "text | json");

  RunArgs bench_args;
  bench_args.out_csv = "bench.csv";
  bench_args.out_json = "bench.json";
  auto* bench = app.add_subcommand(
      "bench", "Monte Carlo MSE sweep over noise levels and UAV counts");
  bench->add_option("--config", bench_args.config_path, "Sweep config file")
      ->required();
  bench->add_option("--out-csv", bench_args.out_csv, "CSV output path");
  bench->add_option("--out-json", bench_args.out_json, "JSON output path");
  bench->add_option("--threads", bench_args.threads, "Worker threads");

  RunArgs conv_args;
  conv_args.out_csv = "convergence.csv";
  conv_args.out_json = "convergence.json";
  auto* conv = app.add_subcommand(
      "convergence", "MSE of the CIS iterate vs iteration count");
  conv->add_option("--config", conv_args.config_path, "Sweep config file")
      ->required();
  conv->add_option("--out-csv", conv_args.out_csv, "CSV output path");
  conv->add_option("--out-json", conv_args.out_json, "JSON output path");
  conv->add_option("--threads", conv_args.threads, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim);
    if (estimate->parsed()) return run_estimate(est);
    if (crlb_cmd->parsed()) return run_crlb(crl);
    if (bench->parsed()) return run_bench(bench_args);
    if (conv->parsed()) return run_convergence(conv_args);
  } catch (const aoa::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_status();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
