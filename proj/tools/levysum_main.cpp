// Copyright 2026 the levysum authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Every subcommand is config-driven; flags override
// the execution environment (seed, output directory, workers, budget).

#include <CLI11.hpp>
#include <cstdio>
#include <string>
#include <vector>

#include "levysum/io.hpp"
#include "levysum/runner.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  bool threads_set = false;
  std::int64_t budget = 0;
  bool budget_set = false;
  std::vector<std::string> checks;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config,
                  "config file path or inline JSON object");
  cmd->add_option("--out", flags.out, "artifact output directory");
  cmd->add_option("--seed", flags.seed, "64-bit seed (recorded in artifacts)")
      ->each([&](const std::string&) { flags.seed_set = true; });
  cmd->add_option("--threads", flags.threads,
                  "worker count; results never depend on it")
      ->each([&](const std::string&) { flags.threads_set = true; });
  cmd->add_option("--budget", flags.budget, "sample budget cap")
      ->each([&](const std::string&) { flags.budget_set = true; });
}

int run_command(const std::string& command, const CommonFlags& flags) {
  levysum::RunConfig cfg;
  try {
    if (!flags.config.empty()) {
      nlohmann::json j;
      const auto first = flags.config.find_first_not_of(" \t\r\n");
      if (first != std::string::npos && flags.config[first] == '{') {
        j = nlohmann::json::parse(flags.config, nullptr, false);
        if (j.is_discarded())
          throw levysum::ConfigError("config: invalid inline JSON");
      } else {
        j = nlohmann::json::parse(levysum::read_text_file(flags.config));
      }
      if (!j.contains("command")) j["command"] = command;
      cfg = levysum::parse_run_config(j);
      if (cfg.command != command)
        throw levysum::ConfigError("config command '" + cfg.command +
                                   "' does not match subcommand '" + command +
                                   "'");
    } else {
      cfg.command = command;
    }
    if (flags.seed_set) cfg.seed = flags.seed;
    if (!flags.out.empty()) cfg.out_dir = flags.out;
    if (flags.threads_set) cfg.threads = flags.threads;
    if (flags.budget_set) cfg.budget = flags.budget;
    if (!flags.checks.empty() && command == "verify") {
      nlohmann::json selected = nlohmann::json::array();
      if (!cfg.verify.is_null() && cfg.verify.contains("checks")) {
        for (const auto& check : cfg.verify.at("checks"))
          for (const std::string& want : flags.checks)
            if (check.contains("name") && check.at("name") == want)
              selected.push_back(check);
      }
      if (selected.empty())
        for (const std::string& want : flags.checks)
          selected.push_back({{"name", want}});
      cfg.verify = {{"checks", selected}};
    }
  } catch (const levysum::ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config: %s\n", e.what());
    return 2;
  }

  const levysum::RunResult result = levysum::run_config(std::move(cfg));
  std::printf("%s\n", result.summary.dump(2).c_str());
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "levysum: simulation and verification toolkit for sums of independent "
      "geometric Levy processes"};
  app.require_subcommand(1);

  const std::vector<std::string> commands = {"classify",     "rate",
                                             "simulate",     "limit-sample",
                                             "verify",       "rem-preset"};
  const std::vector<std::string> descriptions = {
      "classify a (model, growth rule) pair into zero/slow/critical/fast",
      "evaluate the rate function I, its derivative and inverse",
      "simulate normalized ensembles of Z_N with top-k order statistics",
      "sample the limiting OU / Gaussian / stable processes",
      "run statistical verification checks and emit reports",
      "partition-function preset: mean check for Z_N(0) with s = beta^2 n"};

  std::vector<CommonFlags> flags(commands.size());
  for (std::size_t i = 0; i < commands.size(); ++i) {
    CLI::App* cmd = app.add_subcommand(commands[i], descriptions[i]);
    add_common(cmd, flags[i]);
    if (commands[i] == "verify")
      cmd->add_option("--check", flags[i].checks,
                      "run only the named checks (repeatable)");
  }

  CLI11_PARSE(app, argc, argv);

  for (std::size_t i = 0; i < commands.size(); ++i)
    if (app.get_subcommand(commands[i])->parsed())
      return run_command(commands[i], flags[i]);
  return 2;
}
