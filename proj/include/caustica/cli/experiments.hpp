#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "caustica/cli/config.hpp"
#include "caustica/cli/csv.hpp"
#include "json.hpp"

namespace caustica::cli {

/// Bumped on any change to CSV columns or summary layout: major for removals
/// and renames, minor for additions.
std::string report_schema_version();

struct Column {
  std::string name;
  std::string description;
};

struct Report {
  std::vector<Column> columns;
  std::vector<Row> rows;        // in scan order
  nlohmann::json summary;       // schema_version, experiment, settings, columns, derived, flags
};

/// Runs the experiment; rows are computed on up to `threads` workers
/// (0 = hardware concurrency). Numeric failures propagate as NumericError.
Report run_experiment(const ExperimentConfig& config, int threads = 0);

struct WrittenFiles {
  std::filesystem::path csv;
  std::filesystem::path summary;
};

/// Writes <dir>/<stem>.csv and <dir>/<stem>.json.
WrittenFiles write_report(const Report& report, const ExperimentConfig& config, const std::filesystem::path& dir);

}  // namespace caustica::cli
