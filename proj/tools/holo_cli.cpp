// holo_cli <subcommand> --config <file> [--seed <u64>] [--out <dir>]

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "holo/config.hpp"
#include "holo/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Holonomic gate experiments in the tripod model"};
  std::string subcommand;
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir;
  app.add_option("subcommand", subcommand, "gate | holonomy | noise-mc | scaling | timing | convergence")
      ->required()
      ->check(CLI::IsMember({"gate", "holonomy", "noise-mc", "scaling", "timing", "convergence"}));
  app.add_option("--config", config_path, "INI config file")->required();
  auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
  auto* out_opt = app.add_option("--out", out_dir, "output directory (overrides [output] dir)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : holo::kExitConfig;
  }

  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read config " << config_path << "\n";
    return holo::kExitIo;
  }
  std::stringstream text;
  text << in.rdbuf();

  holo::RunConfig cfg;
  holo::RunOptions opts;
  try {
    // the positional subcommand fills in a missing one and must agree with a present one
    std::string body = text.str();
    const bool has_sub = [&] {
      std::istringstream lines(body);
      for (std::string line; std::getline(lines, line);) {
        const auto t = holo::detail::trim(line);
        if (!t.empty() && t.front() == '[') return false;
        if (t.rfind("subcommand", 0) == 0) return true;
      }
      return false;
    }();
    if (!has_sub) body = "subcommand = " + subcommand + "\n" + body;
    cfg = holo::parse_config(body);
    if (holo::to_string(cfg.subcommand) != subcommand) {
      throw holo::ConfigError(holo::ConfigError::Kind::bad_value, "subcommand", 0,
                              "config says '" + std::string(holo::to_string(cfg.subcommand)) +
                                  "' but the command line asks for '" + subcommand + "'");
    }
    if (*seed_opt) {
      cfg.seed = seed;
      cfg.noise.seed = seed;
    }
    if (*out_opt) cfg.output.dir = out_dir;
    opts.threads = holo::threads_from_env();
  } catch (const holo::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return holo::kExitConfig;
  }

  const holo::RunOutcome outcome = holo::run(cfg, opts);
  std::cout << holo::emit_report(outcome);
  if (outcome.exit_code != holo::kExitOk) std::cerr << "error: " << outcome.error << "\n";
  return outcome.exit_code;
}
