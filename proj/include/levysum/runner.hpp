// Copyright 2026 the levysum authors
// SPDX-License-Identifier: Apache-2.0
//
// Experiment orchestration: executes a RunConfig, writes artifacts under the
// output directory, and returns a machine-readable summary. Identical
// configs and seeds yield byte-identical artifacts for any worker count.

#pragma once

#include "levysum/config.hpp"
#include "levysum/verify.hpp"

namespace levysum {

struct RunResult {
  int exit_code = 0;  // 0 ok, 1 check failed, 2 schema, 3 domain, 4 budget
  nlohmann::json summary;
};

// Runs the command described by cfg. Throws nothing: errors are mapped to
// exit codes and reported in the summary.
RunResult run_config(RunConfig cfg);

// Names of the registered verification checks (CLI --check values).
std::vector<std::string> registered_checks();

// Runs one registered check with defaults overridden by params.
CheckReport run_registered_check(const std::string& name,
                                 const nlohmann::json& params,
                                 std::uint64_t seed, int threads,
                                 std::int64_t budget);

}  // namespace levysum
