#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "spdc/optimizer.hpp"
#include "spdc/units.hpp"

namespace spdc {

enum class Task { Constants, JsaGrid, ScanLength, ScanWaist, Separability, Optimize };
enum class OracleChoice { Analytic, Numeric, Both };
// scan-waist: which waists follow the scanned value.
enum class WaistMode {
  Equal,    // w = w_P = value
  Pump,     // w_P = value, w fixed
  Fiber,    // w = value, w_P fixed
  Optimal   // w_P = value, (L, w) at the analytic optimum
};
enum class OptimizeMode { Lw, Fit, Global };
enum class Spacing { Linear, Log };

struct ScanGrid {
  double start = 0.0;
  double stop = 0.0;
  int points = 0;
  Spacing spacing = Spacing::Linear;

  std::vector<double> values() const;
};

// Environment variable naming the directory searched for crystal constants files.
inline constexpr const char* kConstantsDirEnv = "SPDC_CONSTANTS_DIR";

struct RunConfig {
  std::filesystem::path constants_path;  // resolved
  double wavelength = 780e-9;
  std::optional<double> theta0;  // exactly one of theta0, alpha
  std::optional<double> alpha;
  double axis_plane_angle = 0.25 * kPi;

  double L = 1e-3;
  double w = 100e-6;
  double w_pump = 100e-6;
  std::optional<double> h;  // unset: optimal offset
  double pump_width = 5e-9;    // in wavelength
  double filter_width = 17e-9;
  WidthConvention convention = WidthConvention::AmplitudeHalfWidth1e;

  Task task = Task::Constants;
  // Also the objective of task optimize (analytic or numeric).
  OracleChoice oracle = OracleChoice::Analytic;

  ScanGrid scan;
  WaistMode waist_mode = WaistMode::Equal;
  double jsa_span = 20e-9;  // full wavelength range per axis, centered on lambda0
  int jsa_points = 21;

  OptimizeMode optimize_mode = OptimizeMode::Lw;
  InnerOptimum inner = InnerOptimum::Analytic;
  int fit_points = 30;
  double fit_min = 10e-6;
  double fit_max = 300e-6;
  Bounds bounds;

  QuadratureSpec quadrature;
  OracleModel oracle_model;  // profile and second_order only

  // Probabilities are divided by the analytic probability of this setup.
  double reference_L = 1e-3;
  double reference_w = 100e-6;
  double reference_w_pump = 100e-6;

  std::string csv_path;
  std::string json_path;
  int threads = 0;  // 0: hardware concurrency

  void validate() const;
  // Canonical text of every setting, SI values in shortest round-trip form.
  std::vector<std::pair<std::string, std::string>> resolved() const;
  std::string to_text() const;
};

// Parses config text; relative paths resolve against base_dir, then the
// directory in SPDC_CONSTANTS_DIR, then the bundled data directory.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir,
                       const std::string& stem = "spdc");

// Reads a config file, or the metadata.config block of a JSON run summary.
RunConfig load_config(const std::filesystem::path& path);

std::string to_string(Task t);
std::string to_string(OracleChoice o);

}  // namespace spdc
