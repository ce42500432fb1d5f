#include <iostream>

#include "CLI11.hpp"
#include "spdc/errors.hpp"
#include "spdc/scan.hpp"
#include "spdc/version.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kNumericError = 2;

template <class F>
int guarded(F&& f) {
  try {
    f();
    return kOk;
  } catch (const spdc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const spdc::NumericalError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kNumericError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fiber-coupled type-I down-conversion: spectra, probabilities, optimization"};
  app.set_version_flag("--version", std::string(spdc::kToolVersion));
  app.require_subcommand(1);
  app.footer(std::string("Relative crystal.constants paths are looked up next to the config, then in $") +
             spdc::kConstantsDirEnv + ", then in the bundled data directory.\n"
             "Exit codes: 0 ok, 1 config error, 2 numeric or physics error.");

  std::string config_path;
  std::string output_dir = ".";
  bool quiet = false;

  auto* run = app.add_subcommand("run", "Run the configured task and write CSV and JSON outputs");
  run->add_option("config", config_path, "Config file, or a JSON summary from an earlier run")->required();
  run->add_option("-o,--output-dir", output_dir, "Directory for relative output paths");
  run->add_flag("-q,--quiet", quiet, "Do not print output paths");

  auto* validate = app.add_subcommand("validate", "Parse the config and derive the crystal constants");
  validate->add_option("config", config_path, "Config file")->required();

  auto* constants = app.add_subcommand("constants", "Print the derived optical constants as JSON");
  constants->add_option("config", config_path, "Config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  if (run->parsed()) {
    return guarded([&] {
      const auto config = spdc::load_config(config_path);
      const auto result = spdc::run(config);
      const auto paths = spdc::write_outputs(result, config, output_dir);
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
      if (!quiet) std::cout << paths.csv.string() << "\n" << paths.json.string() << "\n";
    });
  }
  if (validate->parsed()) {
    return guarded([&] {
      const auto config = spdc::load_config(config_path);
      spdc::prepare_crystal(config);
      std::cout << "ok: task " << spdc::to_string(config.task) << ", oracle " << spdc::to_string(config.oracle)
                << "\n";
    });
  }
  return guarded([&] {
    const auto config = spdc::load_config(config_path);
    const auto prepared = spdc::prepare_crystal(config);
    std::cout << spdc::constants_json(prepared.constants).dump(2) << "\n";
  });
}
