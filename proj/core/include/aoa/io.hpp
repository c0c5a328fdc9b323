#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "aoa/montecarlo.hpp"
#include "aoa/types.hpp"

namespace aoa {

enum class AngleUnit { Radians, Degrees };

/// Value formatted with 12 significant digits; the declared precision of
/// every CSV/JSON field the tools emit.
std::string format_sig(double value);

/// Rounds through the 12-significant-digit representation (what a reader of
/// the emitted files reconstructs).
double round_sig(double value);

// Scenario file: "# aoa-scenario v1", one "source x y z" line, M "uav x y z"
// lines, meters, whitespace separated.
void write_scenario_file(const std::filesystem::path& path,
                         const Scenario& scenario);
Scenario read_scenario_file(const std::filesystem::path& path);

// Measurements file: "# aoa-measurements v1", M "theta phi" lines in the
// declared unit.
void write_measurements_file(const std::filesystem::path& path,
                             const AngleMeasurementSet& measurements,
                             AngleUnit unit);
AngleMeasurementSet read_measurements_file(const std::filesystem::path& path,
                                           AngleUnit unit);

/// Sweep/convergence configuration parsed from "key = value" lines.
/// Unknown keys are errors; diagnostics carry the line number.
struct ParsedSweepFile {
  SweepConfig config;
  std::optional<CisInit> initializer;  // convergence-only key
  std::optional<int> k_max;            // convergence-only key
};

ParsedSweepFile parse_sweep_config(const std::string& text);
ParsedSweepFile read_sweep_config(const std::filesystem::path& path);

// Result serialization. CSV column order is fixed; JSON carries the same
// fields. Both embed the master seed.
std::string sweep_csv(const SweepResult& result);
std::string sweep_json(const SweepResult& result);
std::string convergence_csv(const ConvergenceResult& result);
std::string convergence_json(const ConvergenceResult& result);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

}  // namespace aoa
