#pragma once

#include <json.hpp>

#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include "experiment_config.hpp"

namespace wwgm::cli {

/// Files written by one run (relative to the output directory) and a summary
/// of the headline numbers, also written as <experiment>.json.
struct RunReport {
  std::vector<std::string> files;
  nlohmann::ordered_json summary;
};

/// Runs config.experiment and writes its artifacts, config.json and
/// manifest.json into out_dir. Data files depend only on the config.
RunReport run(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/// Writes to a temporary sibling and renames it over path.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// 2 for ValidationError, 3 for AccuracyError, 1 otherwise.
int exit_code_for(const std::exception& e);

/// {"error": kind, "message": ..., "exit_code": ...} on one line.
std::string error_record(const std::exception& e);

}  // namespace wwgm::cli
