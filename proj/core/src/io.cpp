#include "aoa/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace aoa {

namespace {

constexpr double kDegPerRad = 180.0 / std::numbers::pi;

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

double parse_double(const std::string& tok, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == nullptr || *end != '\0')
    throw ConfigError(where + ": expected a number, got '" + tok + "'");
  return v;
}

long parse_long(const std::string& tok, const std::string& where) {
  char* end = nullptr;
  const long v = std::strtol(tok.c_str(), &end, 10);
  if (end == nullptr || *end != '\0')
    throw ConfigError(where + ": expected an integer, got '" + tok + "'");
  return v;
}

bool parse_bool(const std::string& tok, const std::string& where) {
  if (tok == "true" || tok == "1" || tok == "yes") return true;
  if (tok == "false" || tok == "0" || tok == "no") return false;
  throw ConfigError(where + ": expected true/false, got '" + tok + "'");
}

nlohmann::ordered_json json_number(double v) {
  if (std::isfinite(v)) return round_sig(v);
  return nullptr;  // NaN / infinities have no JSON representation
}

}  // namespace

std::string format_sig(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

double round_sig(double value) {
  if (!std::isfinite(value)) return value;
  return std::strtod(format_sig(value).c_str(), nullptr);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void write_scenario_file(const std::filesystem::path& path,
                         const Scenario& scenario) {
  std::ostringstream out;
  out << "# aoa-scenario v1\n";
  out << "source " << format_sig(scenario.source.x()) << ' '
      << format_sig(scenario.source.y()) << ' '
      << format_sig(scenario.source.z()) << '\n';
  for (const Point3& uav : scenario.uavs)
    out << "uav " << format_sig(uav.x()) << ' ' << format_sig(uav.y()) << ' '
        << format_sig(uav.z()) << '\n';
  write_text_file(path, out.str());
}

Scenario read_scenario_file(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line) || split_ws(line) != split_ws("# aoa-scenario v1"))
    throw ConfigError(path.string() + ": missing '# aoa-scenario v1' header");
  Scenario scenario;
  bool have_source = false;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (tokens[0] == "source" && tokens.size() == 4) {
      if (have_source) throw ConfigError(where + ": duplicate source line");
      scenario.source = Point3(parse_double(tokens[1], where),
                               parse_double(tokens[2], where),
                               parse_double(tokens[3], where));
      have_source = true;
    } else if (tokens[0] == "uav" && tokens.size() == 4) {
      scenario.uavs.emplace_back(parse_double(tokens[1], where),
                                 parse_double(tokens[2], where),
                                 parse_double(tokens[3], where));
    } else {
      throw ConfigError(where + ": expected 'source x y z' or 'uav x y z'");
    }
  }
  if (!have_source)
    throw ConfigError(path.string() + ": no source line");
  return scenario;
}

void write_measurements_file(const std::filesystem::path& path,
                             const AngleMeasurementSet& measurements,
                             AngleUnit unit) {
  const double scale = unit == AngleUnit::Degrees ? kDegPerRad : 1.0;
  std::ostringstream out;
  out << "# aoa-measurements v1\n";
  for (const AnglePair& pair : measurements)
    out << format_sig(pair.azimuth * scale) << ' '
        << format_sig(pair.elevation * scale) << '\n';
  write_text_file(path, out.str());
}

AngleMeasurementSet read_measurements_file(const std::filesystem::path& path,
                                           AngleUnit unit) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line) ||
      split_ws(line) != split_ws("# aoa-measurements v1"))
    throw ConfigError(path.string() + ": missing '# aoa-measurements v1' header");
  const double scale = unit == AngleUnit::Degrees ? 1.0 / kDegPerRad : 1.0;
  AngleMeasurementSet measurements;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (tokens.size() != 2)
      throw ConfigError(where + ": expected 'theta phi'");
    measurements.emplace_back(parse_double(tokens[0], where) * scale,
                              parse_double(tokens[1], where) * scale);
  }
  return measurements;
}

ParsedSweepFile parse_sweep_config(const std::string& text) {
  ParsedSweepFile parsed;
  SweepConfig& config = parsed.config;
  config.m_values.clear();
  config.sigma2_values.clear();
  config.estimators.clear();

  bool saw_sigma2_phi = false;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    const auto eq = line.find('=');
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (eq == std::string::npos)
      throw ConfigError(where + ": expected 'key = value'");
    const auto key_tokens = split_ws(line.substr(0, eq));
    auto values = split_ws(line.substr(eq + 1));
    if (key_tokens.size() != 1)
      throw ConfigError(where + ": expected a single key before '='");
    const std::string& key = key_tokens[0];
    if (values.empty())
      throw ConfigError(where + ": field '" + key + "' has no value");
    const std::string loc = where + ", field '" + key + "'";

    auto single = [&]() -> const std::string& {
      if (values.size() != 1)
        throw ConfigError(loc + ": expected a single value");
      return values[0];
    };

    if (key == "source") {
      if (values.size() != 3)
        throw ConfigError(loc + ": expected 'x y z'");
      config.source = Point3(parse_double(values[0], loc),
                             parse_double(values[1], loc),
                             parse_double(values[2], loc));
    } else if (key == "half_width") {
      config.half_width = parse_double(single(), loc);
    } else if (key == "m") {
      for (const auto& v : values)
        config.m_values.push_back(static_cast<int>(parse_long(v, loc)));
    } else if (key == "sigma2_db") {
      for (const auto& v : values)
        config.sigma2_values.push_back(from_decibels(parse_double(v, loc)));
    } else if (key == "trials") {
      config.trials = static_cast<int>(parse_long(single(), loc));
    } else if (key == "seed") {
      config.master_seed =
          static_cast<std::uint64_t>(std::strtoull(single().c_str(), nullptr, 10));
    } else if (key == "estimators") {
      for (const auto& v : values)
        config.estimators.push_back(parse_estimator(v));
    } else if (key == "equal_variance") {
      config.equal_variance = parse_bool(single(), loc);
    } else if (key == "sigma2_phi_db") {
      config.sigma2_elevation = from_decibels(parse_double(single(), loc));
      saw_sigma2_phi = true;
    } else if (key == "fixed_scenario") {
      config.fixed_scenario = parse_bool(single(), loc);
    } else if (key == "initializer") {
      const std::string& v = single();
      if (v == "warm-start") parsed.initializer = CisInit::WarmStartLs;
      else if (v == "random-cube") parsed.initializer = CisInit::RandomInCube;
      else throw ConfigError(loc + ": expected warm-start or random-cube");
    } else if (key == "k_max") {
      parsed.k_max = static_cast<int>(parse_long(single(), loc));
    } else if (key == "cis_max_iterations") {
      config.cis_options.max_iterations =
          static_cast<int>(parse_long(single(), loc));
    } else if (key == "cis_tolerance") {
      config.cis_options.position_tolerance = parse_double(single(), loc);
    } else if (key == "cis_init") {
      const std::string& v = single();
      if (v == "warm-start") config.cis_options.initializer = CisInit::WarmStartLs;
      else if (v == "random-cube")
        config.cis_options.initializer = CisInit::RandomInCube;
      else throw ConfigError(loc + ": expected warm-start or random-cube");
    } else {
      throw ConfigError(loc + ": unknown key");
    }
  }

  if (config.sigma2_values.empty())
    throw ConfigError("field 'sigma2_db' is missing or empty");
  if (config.m_values.empty())
    throw ConfigError("field 'm' is missing or empty");
  if (!config.equal_variance && !saw_sigma2_phi)
    throw ConfigError(
        "field 'sigma2_phi_db' is required when equal_variance = false");
  return parsed;
}

ParsedSweepFile read_sweep_config(const std::filesystem::path& path) {
  try {
    return parse_sweep_config(read_text_file(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "# aoa-sweep v1 seed=" << result.master_seed << '\n';
  out << "estimator,M,sigma2_db,mse_m2,mse_db,crlb_trace_m2,crlb_trace_db,"
         "mean_iters,failures,trials\n";
  for (const SweepCell& cell : result.cells) {
    out << cell.estimator << ',' << cell.sensors << ','
        << format_sig(to_decibels(cell.sigma2)) << ','
        << format_sig(cell.mse_m2) << ',' << format_sig(cell.mse_db) << ','
        << format_sig(cell.crlb_trace_m2) << ','
        << format_sig(cell.crlb_trace_db) << ','
        << format_sig(cell.mean_iterations) << ',' << cell.failures << ','
        << cell.trials << '\n';
  }
  return out.str();
}

std::string sweep_json(const SweepResult& result) {
  nlohmann::ordered_json doc;
  doc["format"] = "aoa-sweep";
  doc["version"] = 1;
  doc["master_seed"] = result.master_seed;
  doc["cells"] = nlohmann::ordered_json::array();
  for (const SweepCell& cell : result.cells) {
    nlohmann::ordered_json c;
    c["estimator"] = cell.estimator;
    c["M"] = cell.sensors;
    c["sigma2_db"] = json_number(to_decibels(cell.sigma2));
    c["mse_m2"] = json_number(cell.mse_m2);
    c["mse_db"] = json_number(cell.mse_db);
    c["crlb_trace_m2"] = json_number(cell.crlb_trace_m2);
    c["crlb_trace_db"] = json_number(cell.crlb_trace_db);
    c["mean_iters"] = json_number(cell.mean_iterations);
    c["failures"] = cell.failures;
    c["trials"] = cell.trials;
    doc["cells"].push_back(std::move(c));
  }
  return doc.dump(2) + "\n";
}

std::string convergence_csv(const ConvergenceResult& result) {
  std::ostringstream out;
  out << "# aoa-convergence v1 seed=" << result.master_seed << '\n';
  out << "sigma2_db,k,mse_m2,mse_db,failures,trials\n";
  for (const ConvergenceCell& cell : result.cells) {
    out << format_sig(to_decibels(cell.sigma2)) << ',' << cell.iteration << ','
        << format_sig(cell.mse_m2) << ',' << format_sig(cell.mse_db) << ','
        << cell.failures << ',' << cell.trials << '\n';
  }
  return out.str();
}

std::string convergence_json(const ConvergenceResult& result) {
  nlohmann::ordered_json doc;
  doc["format"] = "aoa-convergence";
  doc["version"] = 1;
  doc["master_seed"] = result.master_seed;
  doc["cells"] = nlohmann::ordered_json::array();
  for (const ConvergenceCell& cell : result.cells) {
    nlohmann::ordered_json c;
    c["sigma2_db"] = json_number(to_decibels(cell.sigma2));
    c["k"] = cell.iteration;
    c["mse_m2"] = json_number(cell.mse_m2);
    c["mse_db"] = json_number(cell.mse_db);
    c["failures"] = cell.failures;
    c["trials"] = cell.trials;
    doc["cells"].push_back(std::move(c));
  }
  return doc.dump(2) + "\n";
}

}  // namespace aoa
