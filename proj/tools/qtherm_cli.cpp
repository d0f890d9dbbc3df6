#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qtherm/scenario.hpp"

// Exit codes: 0 success, 2 config error, 3 numerical failure, 4 I/O error.

namespace {

int run_command(const std::string& config_path, const std::string& out_dir,
                const std::optional<std::uint64_t>& seed) {
  qtherm::ScenarioConfig config =
      qtherm::ScenarioConfig::from_json_file(config_path);
  if (seed) config.seed = *seed;
  const qtherm::RunSummary summary = qtherm::run_scenario(config, out_dir);
  std::cout << summary.to_json_text();
  return 0;
}

int validate_command(const std::string& config_path) {
  const qtherm::ScenarioConfig config =
      qtherm::ScenarioConfig::from_json_file(config_path);
  const qtherm::ScenarioValidation v = qtherm::validate_scenario(config);
  std::cout << v.text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qtherm: master-equation trajectories with entropy, heat and "
               "work ledgers"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;

  CLI::App* run = app.add_subcommand("run", "run a scenario config");
  run->add_option("config", config_path, "scenario JSON file")->required();
  run->add_option("--out", out_dir, "output directory (default: cwd)");
  run->add_option("--seed", seed, "override the config seed");

  CLI::App* validate =
      app.add_subcommand("validate", "check a scenario config without running");
  validate->add_option("config", config_path, "scenario JSON file")->required();

  app.add_subcommand("list-scenarios", "print the shipped scenario kinds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (run->parsed()) return run_command(config_path, out_dir, seed);
    if (validate->parsed()) return validate_command(config_path);
    qtherm::list_scenarios(std::cout);
    return 0;
  } catch (const qtherm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const qtherm::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  } catch (const qtherm::Error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
}
