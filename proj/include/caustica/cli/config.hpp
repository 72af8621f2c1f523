#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "caustica/classical.hpp"
#include "json.hpp"

namespace caustica::cli {

enum class ExperimentKind { caustic_scan, spectrum, kernel, slit, susceptibility_scan, oracle_compare };

enum class FloatFormat { fixed17, shortest };

std::string to_string(ExperimentKind kind);
std::string to_string(FloatFormat format);

/// Parameters a scan axis may drive. "omega" and "omega_T" multiply the
/// lambda profile by omega^2 (omega = value / T for omega_T).
inline const std::vector<std::string>& scan_parameters() {
  static const std::vector<std::string> names{"omega", "omega_T", "horizon", "a", "p", "sigma0", "tau", "hbar", "b"};
  return names;
}

/// Parameters meaningful for an experiment kind.
std::vector<std::string> scan_parameters_for(ExperimentKind kind);

struct ScanAxis {
  std::string parameter;
  double min = 0.0;
  double max = 0.0;
  int steps = 2;

  double value(int i) const;
};

struct SlitConfig {
  double a = 1.0;
  double sigma0 = 1.0;
  std::optional<double> p;    // coupled default: p = a / tau, or 0 if neither is given
  std::optional<double> tau;
  bool decoupled = false;
};

struct NumericConfig {
  SolverSettings solver;
  double hbar = 1.0;
  int spectrum_points = 1024;  // interior grid points N for the eigen-solver
  int eigenvalues = 5;         // n_max
  int oracle_points = 2048;
  int oracle_steps = 2048;
  int threads = 0;             // 0: hardware concurrency
};

struct OutputConfig {
  std::string stem;  // file stem; defaults to the experiment name
  FloatFormat float_format = FloatFormat::fixed17;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::caustic_scan;
  double horizon = 1.0;
  nlohmann::json lambda;  // profile fragments, re-parsed per scan point
  nlohmann::json mu;
  std::optional<ScanAxis> scan;
  NumericConfig numeric;
  SlitConfig slit;
  double kernel_a = 0.0;  // kernel experiment evaluates K(b; a)
  double kernel_b = 0.0;
  OutputConfig output;
  nlohmann::json source;  // the config as read, echoed into the summary
};

/// Throws ParseError / ValidationError (both InputError) on bad input.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig parse_config_text(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Resolved, canonical form of the config (defaults filled in).
nlohmann::json to_json(const ExperimentConfig& config);

}  // namespace caustica::cli
