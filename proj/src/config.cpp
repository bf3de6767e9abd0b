// Copyright 2026 the levysum authors
// SPDX-License-Identifier: Apache-2.0

#include "levysum/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "levysum/io.hpp"

namespace levysum {

namespace {

double get_number(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.contains(key))
    throw ConfigError(where + ": missing required key '" + key + "'");
  if (!j.at(key).is_number())
    throw ConfigError(where + ": key '" + key + "' must be a number");
  return j.at(key).get<double>();
}

}  // namespace

void require_keys(const nlohmann::json& j,
                  std::initializer_list<const char*> allowed,
                  const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
          return key == a;
        }) == allowed.end())
      throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

LevyModel model_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigError("model: expected an object with a 'kind' key");
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "brownian") {
      require_keys(j, {"kind", "mu", "sigma"}, "model");
      return LevyModel::brownian(get_number(j, "mu", "model"),
                                 get_number(j, "sigma", "model"));
    }
    if (kind == "cpg") {
      require_keys(j, {"kind", "rate", "jump_mean", "jump_sd", "drift"}, "model");
      return LevyModel::compound_poisson_gauss(
          get_number(j, "rate", "model"), get_number(j, "jump_mean", "model"),
          get_number(j, "jump_sd", "model"), get_number(j, "drift", "model"));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  throw ConfigError("model: unknown kind '" + kind + "' (brownian | cpg)");
}

nlohmann::json model_to_json(const LevyModel& m) {
  if (m.kind == LevyModel::Kind::BrownianMotion)
    return {{"kind", "brownian"}, {"mu", m.mu}, {"sigma", m.sigma}};
  return {{"kind", "cpg"},
          {"rate", m.rate},
          {"jump_mean", m.jump_mean},
          {"jump_sd", m.jump_sd},
          {"drift", m.drift}};
}

GrowthRule growth_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigError("growth: expected an object with a 'kind' key");
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "constant") {
      require_keys(j, {"kind", "s"}, "growth");
      return GrowthRule::constant(get_number(j, "s", "growth"));
    }
    if (kind == "proportional") {
      require_keys(j, {"kind", "lambda"}, "growth");
      return GrowthRule::proportional(get_number(j, "lambda", "growth"));
    }
    if (kind == "critical") {
      require_keys(j, {"kind", "theta", "s"}, "growth");
      return GrowthRule::critical(get_number(j, "theta", "growth"),
                                  get_number(j, "s", "growth"));
    }
    if (kind == "table") {
      require_keys(j, {"kind", "pairs"}, "growth");
      if (!j.contains("pairs") || !j.at("pairs").is_array())
        throw ConfigError("growth: 'pairs' must be an array of [N, s] pairs");
      std::vector<std::pair<std::int64_t, double>> pairs;
      for (const auto& p : j.at("pairs")) {
        if (!p.is_array() || p.size() != 2)
          throw ConfigError("growth: each table entry must be [N, s]");
        pairs.emplace_back(p.at(0).get<std::int64_t>(), p.at(1).get<double>());
      }
      return GrowthRule::explicit_table(std::move(pairs));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("growth: ") + e.what());
  }
  throw ConfigError("growth: unknown kind '" + kind +
                    "' (constant | proportional | critical | table)");
}

nlohmann::json growth_to_json(const GrowthRule& r) {
  switch (r.kind) {
    case GrowthRule::Kind::Constant:
      return {{"kind", "constant"}, {"s", r.s}};
    case GrowthRule::Kind::Proportional:
      return {{"kind", "proportional"}, {"lambda", r.lambda}};
    case GrowthRule::Kind::Critical:
      return {{"kind", "critical"}, {"theta", r.theta}, {"s", r.critical_s}};
    case GrowthRule::Kind::Table: {
      nlohmann::json pairs = nlohmann::json::array();
      for (const auto& [n, s] : r.table) pairs.push_back({n, s});
      return {{"kind", "table"}, {"pairs", pairs}};
    }
  }
  throw std::logic_error("unreachable growth kind");
}

namespace {

std::optional<RegimeClass::Kind> regime_kind_from(const std::string& name) {
  if (name == "zero") return RegimeClass::Kind::Zero;
  if (name == "slow") return RegimeClass::Kind::Slow;
  if (name == "critical") return RegimeClass::Kind::Critical;
  if (name == "fast") return RegimeClass::Kind::Fast;
  return std::nullopt;
}

const char* regime_kind_name(RegimeClass::Kind k) {
  RegimeClass rc;
  rc.kind = k;
  return rc.name();
}

}  // namespace

RunConfig parse_run_config(const nlohmann::json& j) {
  require_keys(j,
               {"command", "model", "growth", "regime_override", "seed", "budget",
                "rate", "ensemble", "limit", "verify", "rem", "out", "threads"},
               "config");
  RunConfig cfg;
  if (!j.contains("command") || !j.at("command").is_string())
    throw ConfigError("config: a string 'command' is required");
  cfg.command = j.at("command").get<std::string>();
  static const char* known[] = {"classify", "rate",   "simulate",
                                "limit-sample", "verify", "rem-preset"};
  if (std::find_if(std::begin(known), std::end(known), [&](const char* c) {
        return cfg.command == c;
      }) == std::end(known))
    throw ConfigError("config: unknown command '" + cfg.command + "'");

  if (j.contains("model")) cfg.model = model_from_json(j.at("model"));
  if (j.contains("growth")) cfg.growth = growth_from_json(j.at("growth"));
  if (j.contains("regime_override")) {
    const std::string name = j.at("regime_override").get<std::string>();
    cfg.regime_override = regime_kind_from(name);
    if (!cfg.regime_override)
      throw ConfigError("config: unknown regime_override '" + name + "'");
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
      throw ConfigError("config: 'seed' must be a 64-bit unsigned integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("budget")) {
    cfg.budget = j.at("budget").get<std::int64_t>();
    if (cfg.budget < 1) throw ConfigError("config: 'budget' must be positive");
  }
  if (j.contains("rate")) cfg.rate = j.at("rate");
  if (j.contains("ensemble")) cfg.ensemble = j.at("ensemble");
  if (j.contains("limit")) cfg.limit = j.at("limit");
  if (j.contains("verify")) cfg.verify = j.at("verify");
  if (j.contains("rem")) cfg.rem = j.at("rem");
  if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
  if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();

  // Validate command sections eagerly so schema errors surface before any
  // computation runs.
  if (!cfg.rate.is_null())
    require_keys(cfg.rate, {"beta", "inverse_y"}, "rate");
  if (!cfg.ensemble.is_null())
    require_keys(cfg.ensemble, {"N", "R", "grid", "top_k"}, "ensemble");
  if (!cfg.limit.is_null())
    require_keys(cfg.limit,
                 {"process", "alpha", "tau", "tolerance", "grid", "runs"},
                 "limit");
  if (!cfg.verify.is_null()) require_keys(cfg.verify, {"checks"}, "verify");
  if (!cfg.rem.is_null()) require_keys(cfg.rem, {"beta", "n", "R"}, "rem");
  return cfg;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  if (model) j["model"] = model_to_json(*model);
  if (growth) j["growth"] = growth_to_json(*growth);
  if (regime_override) j["regime_override"] = regime_kind_name(*regime_override);
  if (seed) j["seed"] = *seed;
  if (budget != kDefaultBudget) j["budget"] = budget;
  if (!rate.is_null()) j["rate"] = rate;
  if (!ensemble.is_null()) j["ensemble"] = ensemble;
  if (!limit.is_null()) j["limit"] = limit;
  if (!verify.is_null()) j["verify"] = verify;
  if (!rem.is_null()) j["rem"] = rem;
  return j;
}

RunConfig load_config(const std::string& path_or_inline) {
  std::string text;
  const auto first = path_or_inline.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && path_or_inline[first] == '{') {
    text = path_or_inline;
  } else {
    try {
      text = read_text_file(path_or_inline);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  try {
    return parse_run_config(j);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

}  // namespace levysum
