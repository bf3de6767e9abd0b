// Copyright 2026 the levysum authors
// SPDX-License-Identifier: Apache-2.0
//
// JSON experiment configuration. Parsing is strict: unknown keys are errors,
// and parse(serialize(config)) == config. Execution-environment knobs
// (worker count, output directory) are deliberately kept out of the
// canonical form so they can never change artifact bytes.

#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "levysum/montecarlo.hpp"

namespace levysum {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

LevyModel model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const LevyModel& m);

GrowthRule growth_from_json(const nlohmann::json& j);
nlohmann::json growth_to_json(const GrowthRule& r);

struct RunConfig {
  std::string command;
  std::optional<LevyModel> model;
  std::optional<GrowthRule> growth;
  std::optional<RegimeClass::Kind> regime_override;
  std::optional<std::uint64_t> seed;
  std::int64_t budget = kDefaultBudget;
  // Command sections, kept as validated JSON until the command runs.
  nlohmann::json rate;
  nlohmann::json ensemble;
  nlohmann::json limit;
  nlohmann::json verify;
  nlohmann::json rem;
  // Execution environment (not part of the canonical config).
  std::string out_dir = "artifacts";
  int threads = 0;

  // Canonical experiment-defining JSON; excludes out_dir and threads.
  nlohmann::json to_json() const;
};

RunConfig parse_run_config(const nlohmann::json& j);

// Accepts a file path or inline JSON (first non-space character '{').
RunConfig load_config(const std::string& path_or_inline);

// Fails with ConfigError unless every key of j is in the allowed list.
void require_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                  const std::string& where);

}  // namespace levysum
