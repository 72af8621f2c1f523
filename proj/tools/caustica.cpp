// caustica: run caustic / spectrum / kernel / slit experiments from JSON configs.

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "caustica/cli/config.hpp"
#include "caustica/cli/experiments.hpp"
#include "caustica/errors.hpp"
#include "json.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitOther = 1;

int fail(const std::string& category, const std::exception& e, int code) {
  nlohmann::json err{{"status", "error"}, {"category", category}, {"message", e.what()}};
  if (auto* p = dynamic_cast<const caustica::ParseError*>(&e)) err["position"] = p->position();
  if (auto* ie = dynamic_cast<const caustica::IntegrationError*>(&e)) err["time"] = ie->time();
  std::cerr << err.dump() << '\n';
  return code;
}

int threads_from_env() {
  const char* env = std::getenv("CAUSTICA_THREADS");
  if (!env || !*env) return 0;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 0) throw caustica::ValidationError("CAUSTICA_THREADS must be a non-negative integer");
  return static_cast<int>(n);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Caustics of quadratic Lagrangians: scans, spectra, kernels and slit experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--schema-version", caustica::cli::report_schema_version(), "Print the report schema version");

  std::string config_path;
  std::string out_dir = ".";
  int threads = -1;

  auto* run = app.add_subcommand("run", "Run an experiment and write <stem>.csv and <stem>.json");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--threads", threads, "Worker threads (default: CAUSTICA_THREADS, else all cores)")
      ->check(CLI::NonNegativeNumber);

  auto* validate = app.add_subcommand("validate", "Check a config without running it");
  validate->add_option("config", config_path, "Experiment config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    const caustica::cli::ExperimentConfig config = caustica::cli::load_config(config_path);
    if (*validate) {
      std::cout << nlohmann::json{{"status", "ok"}, {"config", caustica::cli::to_json(config)}}.dump(2) << '\n';
      return EXIT_SUCCESS;
    }
    if (threads < 0) threads = threads_from_env();
    const auto report = caustica::cli::run_experiment(config, threads);
    const auto files = caustica::cli::write_report(report, config, out_dir);
    std::cout << nlohmann::json{{"status", "ok"},
                                {"rows", report.rows.size()},
                                {"csv", files.csv.string()},
                                {"summary", files.summary.string()},
                                {"flags", report.summary["flags"]}}
                     .dump()
              << '\n';
    return EXIT_SUCCESS;
  } catch (const caustica::InputError& e) {
    return fail("config", e, kExitConfig);
  } catch (const caustica::NumericError& e) {
    return fail("numeric", e, kExitNumeric);
  } catch (const std::exception& e) {
    return fail("internal", e, kExitOther);
  }
}
