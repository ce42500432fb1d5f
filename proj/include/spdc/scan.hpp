#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "spdc/config.hpp"

namespace spdc {

using Cell = std::variant<double, long long, std::string>;

struct ScanResult {
  nlohmann::ordered_json metadata;  // tool, resolved config, constants, normalization
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::ordered_json summary;  // task-specific results
  std::vector<std::string> warnings;
};

// Crystal and constants for a config. Errors carry the "crystal-optics" context.
struct PreparedCrystal {
  Crystal crystal;
  OpticalConstants constants;
};
PreparedCrystal prepare_crystal(const RunConfig& config);

nlohmann::ordered_json constants_json(const OpticalConstants& c);

// Executes the configured task. Nothing is written.
ScanResult run(const RunConfig& config);

// RFC 4180 text: header row, CRLF line ends, quoting where needed.
std::string to_csv(const ScanResult& result);
// Summary document with stable key order.
std::string to_json(const ScanResult& result);

struct OutputPaths {
  std::filesystem::path csv;
  std::filesystem::path json;
};
// Writes both files; relative config paths resolve against out_dir.
OutputPaths write_outputs(const ScanResult& result, const RunConfig& config, const std::filesystem::path& out_dir);

}  // namespace spdc
