#include <filesystem>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "phasespace/errors.hpp"
#include "phasespace/scenario.hpp"

namespace {

enum Exit : int { ok = 0, failure = 1, config_error = 2, precondition = 3, numerical = 4 };

int run(const std::string& target) {
  using namespace phasespace;
  std::optional<ScenarioConfig> config;
  if (!std::filesystem::exists(target)) config = builtin_scenario(target);
  if (!config) config = load_config(target);
  const RunResult result = run_scenario(*config, default_output_root());
  std::cout << result.directory.string() << '\n';
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-space quantum dynamics: Wigner, Moyal and tomography scenarios"};
  app.require_subcommand(1);

  std::string target;
  auto* run_cmd = app.add_subcommand("run", "run a config file or a built-in scenario by name");
  run_cmd->add_option("config", target, "config path or built-in scenario name")->required();
  auto* list_cmd = app.add_subcommand("list", "list built-in scenarios");
  auto* version_cmd = app.add_subcommand("version", "print the toolkit version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? ok : config_error;
  }

  try {
    if (*list_cmd) {
      for (const auto& s : phasespace::list_scenarios()) {
        std::cout << std::left << std::setw(20) << s.name << s.description << '\n';
      }
      return ok;
    }
    if (*version_cmd) {
      std::cout << "phasespace " << phasespace::toolkit_version() << '\n';
      return ok;
    }
    if (*run_cmd) return run(target);
  } catch (const phasespace::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const phasespace::PreconditionError& e) {
    std::cerr << "precondition failed [" << e.module() << "." << e.parameter() << "]: " << e.what() << '\n';
    return precondition;
  } catch (const phasespace::NumericalError& e) {
    std::cerr << "numerical monitor tripped: " << e.what() << '\n';
    return numerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "output error: " << e.what() << '\n';
    return config_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return failure;
  }
  return ok;
}
