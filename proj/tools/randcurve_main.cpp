#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "randcurve/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"stochastic curve-geometry experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::string> out_override;

  CLI::App* cmd_run = app.add_subcommand("run", "run an experiment from a JSON config");
  cmd_run->add_option("config", config_path, "config file")->required();
  cmd_run->add_option("--seed", seed_override, "override the config seed");
  cmd_run->add_option("--out", out_override, "override the output prefix");

  CLI::App* cmd_validate = app.add_subcommand("validate", "check a config without running it");
  cmd_validate->add_option("config", config_path, "config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  randcurve::ExperimentConfig config;
  try {
    config = randcurve::ExperimentConfig::from_file(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (seed_override) config.seed = *seed_override;
  if (out_override) config.output = *out_override;

  if (cmd_validate->parsed()) {
    const auto issues = randcurve::validate(config);
    if (issues.empty()) {
      std::cout << "ok\n";
      return 0;
    }
    for (const auto& s : issues) std::cout << s << "\n";
    return 2;
  }

  try {
    const randcurve::Report rep = randcurve::run(config);
    rep.write(config);
    std::cout << config.output << ".csv (" << rep.rows.size() << " rows)\n";
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
