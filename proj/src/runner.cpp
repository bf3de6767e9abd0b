// Copyright 2026 the levysum authors
// SPDX-License-Identifier: Apache-2.0

#include "levysum/runner.hpp"

#include <filesystem>
#include <random>

#include "levysum/io.hpp"
#include "levysum/parallel.hpp"
#include "levysum/rate_function.hpp"

namespace levysum {

namespace fs = std::filesystem;

namespace {

double jnum(const nlohmann::json& j, const char* key, double fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  if (!j.at(key).is_number())
    throw ConfigError(std::string("expected number for '") + key + "'");
  return j.at(key).get<double>();
}

std::int64_t jint(const nlohmann::json& j, const char* key, std::int64_t fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer() && !j.at(key).is_number_unsigned())
    throw ConfigError(std::string("expected integer for '") + key + "'");
  return j.at(key).get<std::int64_t>();
}

std::vector<double> jvec(const nlohmann::json& j, const char* key,
                         std::vector<double> fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  if (!j.at(key).is_array())
    throw ConfigError(std::string("expected array for '") + key + "'");
  std::vector<double> out;
  for (const auto& v : j.at(key)) out.push_back(v.get<double>());
  return out;
}

LevyModel jmodel(const nlohmann::json& j, const LevyModel& fallback) {
  if (!j.is_object() || !j.contains("model")) return fallback;
  return model_from_json(j.at("model"));
}

nlohmann::json regime_to_json(const RegimeClass& rc, const RateProfile& profile) {
  const auto [l1, l2] = critical_points(profile);
  nlohmann::json j{{"regime", rc.name()},
                   {"lambda1", l1},
                   {"lambda2", l2},
                   {"lattice_warning", rc.lattice_warning}};
  if (rc.kind == RegimeClass::Kind::Critical) j["theta"] = rc.theta;
  if (rc.kind == RegimeClass::Kind::Fast) {
    j["lambda"] = rc.lambda;
    j["alpha"] = rc.alpha;
  }
  return j;
}

struct ArtifactSet {
  fs::path dir;
  nlohmann::json files = nlohmann::json::object();

  void put(const std::string& name, const std::string& content) {
    write_text_file(dir / name, content);
    files[name] = sha256_hex(content);
  }
};

const LevyModel& require_model(const RunConfig& cfg) {
  if (!cfg.model)
    throw ConfigError("config: this command requires a 'model' section");
  return *cfg.model;
}

const GrowthRule& require_growth(const RunConfig& cfg) {
  if (!cfg.growth)
    throw ConfigError("config: this command requires a 'growth' section");
  return *cfg.growth;
}

EnsembleSpec ensemble_spec_from(const RunConfig& cfg) {
  EnsembleSpec spec;
  spec.model = require_model(cfg);
  spec.rule = require_growth(cfg);
  spec.N = jint(cfg.ensemble, "N", 0);
  spec.replicates = jint(cfg.ensemble, "R", 1);
  spec.grid = jvec(cfg.ensemble, "grid", {0.0});
  spec.top_k = static_cast<int>(jint(cfg.ensemble, "top_k", 0));
  spec.seed = *cfg.seed;
  spec.threads = cfg.threads;
  spec.budget = cfg.budget;
  spec.regime_override = cfg.regime_override;
  return spec;
}

void run_classify(const RunConfig& cfg, const std::string& spec_hash,
                  ArtifactSet& artifacts, RunResult& result) {
  const LevyModel& model = require_model(cfg);
  const RegimeClass rc = classify(model, require_growth(cfg));
  const RateProfile profile(model);
  nlohmann::json j = regime_to_json(rc, profile);
  j["spec_sha256"] = spec_hash;
  artifacts.put("classify.json", j.dump(2) + "\n");
  result.summary["classification"] = j;
}

void run_rate(const RunConfig& cfg, const std::string& spec_hash,
              ArtifactSet& artifacts, RunResult& result) {
  const LevyModel& model = require_model(cfg);
  const RateProfile profile(model);
  const auto [l1, l2] = critical_points(profile);
  nlohmann::json out{{"model", model_to_json(model)},
                     {"lambda1", l1},
                     {"lambda2", l2},
                     {"spec_sha256", spec_hash}};
  nlohmann::json points = nlohmann::json::array();
  for (double beta : jvec(cfg.rate, "beta", {})) {
    const RateValue rv = rate_eval(profile, beta);
    points.push_back({{"beta", beta},
                      {"I", rv.value},
                      {"dI", rv.derivative},
                      {"u", rv.u}});
  }
  out["points"] = points;
  nlohmann::json inverses = nlohmann::json::array();
  for (double y : jvec(cfg.rate, "inverse_y", {}))
    inverses.push_back({{"y", y}, {"beta", rate_inverse(profile, y)}});
  if (!inverses.empty()) out["inverse"] = inverses;
  artifacts.put("rate.json", out.dump(2) + "\n");
  result.summary["rate"] = out;
}

void run_simulate(const RunConfig& cfg, const std::string& spec_hash,
                  ArtifactSet& artifacts, RunResult& result) {
  const EnsembleSpec spec = ensemble_spec_from(cfg);
  const EnsembleSummary summary = simulate_ensemble(spec);

  CsvWriter csv({"replicate_id", "t", "normalized_value", "raw_value"});
  csv.meta("spec_sha256", spec_hash);
  csv.meta("seed", static_cast<std::uint64_t>(spec.seed));
  csv.meta("command", std::string("simulate"));
  csv.meta("model", spec.model.describe());
  csv.meta("regime", std::string(summary.regime.name()));
  csv.meta("normalization", std::string(normalization_name(summary.mode)));
  csv.meta("N", static_cast<std::uint64_t>(summary.N));
  csv.meta("s", summary.s);
  for (std::int64_t r = 0; r < summary.replicates; ++r)
    for (std::size_t j = 0; j < summary.grid.size(); ++j)
      csv.row({std::to_string(r), format_full(summary.grid[j]),
               format_full(summary.normalized_at(r, j)),
               format_full(summary.raw_at(r, j))});
  artifacts.put("ensemble.csv", csv.str());

  if (spec.top_k > 0) {
    CsvWriter order({"replicate_id", "rank", "value"});
    order.meta("spec_sha256", spec_hash);
    order.meta("seed", static_cast<std::uint64_t>(spec.seed));
    order.meta("command", std::string("simulate"));
    for (std::int64_t r = 0; r < summary.replicates; ++r) {
      const auto& top = summary.top[static_cast<std::size_t>(r)];
      for (std::size_t k = 0; k < top.size(); ++k)
        order.row({std::to_string(r), std::to_string(k + 1), format_full(top[k])});
    }
    artifacts.put("order_stats.csv", order.str());
  }

  result.summary["simulate"] = {{"regime", summary.regime.name()},
                                {"normalization", normalization_name(summary.mode)},
                                {"N", summary.N},
                                {"s", summary.s},
                                {"replicates", summary.replicates},
                                {"lattice_warning", summary.lattice_warning}};
}

void run_limit_sample(const RunConfig& cfg, const std::string& spec_hash,
                      ArtifactSet& artifacts, RunResult& result) {
  if (cfg.limit.is_null())
    throw ConfigError("config: limit-sample requires a 'limit' section");
  const LevyModel& model = require_model(cfg);
  const std::string process = cfg.limit.contains("process")
                                  ? cfg.limit.at("process").get<std::string>()
                                  : "stable";
  const std::vector<double> grid_times = jvec(cfg.limit, "grid", {0.0});
  const std::int64_t runs = jint(cfg.limit, "runs", 100);
  if (runs < 1) throw ConfigError("limit: 'runs' must be >= 1");
  if (static_cast<double>(runs) * grid_times.size() > static_cast<double>(cfg.budget))
    throw BudgetError("limit-sample budget exceeded");

  CsvWriter csv({"run_id", "t", "value"});
  csv.meta("spec_sha256", spec_hash);
  csv.meta("seed", static_cast<std::uint64_t>(*cfg.seed));
  csv.meta("command", std::string("limit-sample"));
  csv.meta("process", process);
  csv.meta("model", model.describe());

  if (process == "stable") {
    const GridSpec grid = GridSpec::make(grid_times, true);
    const double alpha = jnum(cfg.limit, "alpha", 0.5);
    PoissonSeriesConfig series_cfg =
        cfg.limit.contains("tau")
            ? PoissonSeriesConfig::with_truncation(jnum(cfg.limit, "tau", 0.0))
            : PoissonSeriesConfig::with_tolerance(
                  jnum(cfg.limit, "tolerance", 1e-3));
    // Resolve tau once so the metadata reports what every run used.
    const double tau = series_cfg.by_tau
                           ? series_cfg.tau
                           : tau_for_tolerance(model, alpha, series_cfg.tolerance,
                                               grid);
    series_cfg = PoissonSeriesConfig::with_truncation(tau, series_cfg.atom_cap);
    csv.meta("alpha", alpha);
    csv.meta("tau", tau);
    csv.meta("achieved_bound", residual_bound(model, alpha, tau, grid));
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(runs));
    parallel_for(runs, cfg.threads, [&](std::int64_t r) {
      rows[static_cast<std::size_t>(r)] =
          sample_stable_series(model, alpha, grid, series_cfg, *cfg.seed,
                               static_cast<std::uint64_t>(r))
              .path;
    });
    for (std::int64_t r = 0; r < runs; ++r)
      for (std::size_t j = 0; j < grid.times.size(); ++j)
        csv.row({std::to_string(r), format_full(grid.times[j]),
                 format_full(rows[static_cast<std::size_t>(r)][j])});
  } else if (process == "ou" || process == "clt") {
    const GridSpec grid = GridSpec::make(grid_times, process == "clt");
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(runs));
    if (process == "ou") {
      parallel_for(runs, cfg.threads, [&](std::int64_t r) {
        RngStream stream(*cfg.seed, 0x6F75ULL, static_cast<std::uint64_t>(r));
        rows[static_cast<std::size_t>(r)] = sample_ou(model, grid, stream);
      });
    } else {
      const CltGaussianSampler sampler(model, grid);
      parallel_for(runs, cfg.threads, [&](std::int64_t r) {
        RngStream stream(*cfg.seed, 0x636C74ULL, static_cast<std::uint64_t>(r));
        rows[static_cast<std::size_t>(r)] = sampler.sample(stream);
      });
    }
    for (std::int64_t r = 0; r < runs; ++r)
      for (std::size_t j = 0; j < grid.times.size(); ++j)
        csv.row({std::to_string(r), format_full(grid.times[j]),
                 format_full(rows[static_cast<std::size_t>(r)][j])});
  } else {
    throw ConfigError("limit: unknown process '" + process +
                      "' (ou | clt | stable)");
  }
  artifacts.put("limit_sample.csv", csv.str());
  result.summary["limit_sample"] = {{"process", process}, {"runs", runs}};
}

void emit_reports(const std::vector<CheckReport>& reports,
                  const std::string& spec_hash, std::uint64_t seed,
                  ArtifactSet& artifacts, RunResult& result) {
  std::string jsonl;
  CsvWriter summary_csv({"check", "observed", "reference", "tolerance", "pass"});
  summary_csv.meta("spec_sha256", spec_hash);
  summary_csv.meta("seed", static_cast<std::uint64_t>(seed));
  int failures = 0;
  for (const CheckReport& report : reports) {
    jsonl += report.to_json().dump() + "\n";
    for (const CheckRow& row : report.rows) {
      summary_csv.row({report.check + "/" + row.name, format_full(row.observed),
                       format_full(row.reference), format_full(row.tolerance),
                       row.pass ? "true" : "false"});
      if (!row.pass) ++failures;
    }
  }
  artifacts.put("reports.jsonl", jsonl);
  artifacts.put("summary.csv", summary_csv.str());
  result.summary["checks"] = {{"total", reports.size()}, {"failed_rows", failures}};
  if (failures > 0) result.exit_code = 1;
}

void run_verify(const RunConfig& cfg, const std::string& spec_hash,
                ArtifactSet& artifacts, RunResult& result) {
  if (cfg.verify.is_null() || !cfg.verify.contains("checks"))
    throw ConfigError("config: verify requires a 'verify' section with 'checks'");
  std::vector<CheckReport> reports;
  for (const auto& check : cfg.verify.at("checks")) {
    if (!check.is_object() || !check.contains("name"))
      throw ConfigError("verify: each check needs a 'name'");
    nlohmann::json params = check;
    const std::string name = check.at("name").get<std::string>();
    params.erase("name");
    reports.push_back(
        run_registered_check(name, params, *cfg.seed, cfg.threads, cfg.budget));
  }
  emit_reports(reports, spec_hash, *cfg.seed, artifacts, result);
}

void run_rem_preset(const RunConfig& cfg, const std::string& spec_hash,
                    ArtifactSet& artifacts, RunResult& result) {
  McOptions opts{*cfg.seed, cfg.threads, 0};
  const double beta = jnum(cfg.rem, "beta", 0.4);
  const int n = static_cast<int>(jint(cfg.rem, "n", 16));
  const std::int64_t replicates = jint(cfg.rem, "R", 200);
  if ((double{1} * (std::int64_t{1} << n)) * static_cast<double>(replicates) >
      static_cast<double>(cfg.budget))
    throw BudgetError("partition preset exceeds the sample budget");
  const CheckReport report = verify_partition_mean(beta, n, replicates, opts);
  emit_reports({report}, spec_hash, *cfg.seed, artifacts, result);
}

}  // namespace

std::vector<std::string> registered_checks() {
  return {"covariance-raw-exp",      "covariance-ou",
          "covariance-clt",          "truncated-moment-part1",
          "truncated-moment-part2",  "truncated-moment-part3",
          "bahadur-rao",             "order-stats",
          "critical-variance",       "slow-gaussian",
          "stable-marginal",         "stable-residual",
          "ou-stationarity",         "partition-mean"};
}

CheckReport run_registered_check(const std::string& name,
                                 const nlohmann::json& params,
                                 std::uint64_t seed, int threads,
                                 std::int64_t budget) {
  const LevyModel standard = LevyModel::brownian(0.0, 1.0);
  McOptions opts{seed, threads, jint(params, "replicates", 1000000)};

  if (name == "covariance-raw-exp" || name == "covariance-ou" ||
      name == "covariance-clt") {
    require_keys(params, {"model", "grid", "samples", "sigma_band", "replicates"},
                 name);
    const CovarianceMode mode = name == "covariance-raw-exp"
                                    ? CovarianceMode::RawExp
                                    : name == "covariance-ou"
                                          ? CovarianceMode::Ou
                                          : CovarianceMode::CltGaussian;
    const std::vector<double> default_grid =
        mode == CovarianceMode::Ou ? std::vector<double>{0.0, 0.5}
                                   : std::vector<double>{0.0, 0.5, 1.0};
    return verify_covariance(jmodel(params, standard),
                             jvec(params, "grid", default_grid), mode,
                             jint(params, "samples", 100000), opts,
                             jnum(params, "sigma_band", 4.0));
  }
  if (name == "truncated-moment-part1") {
    require_keys(params, {"model", "kappa", "theta", "xs", "tolerance", "replicates"},
                 name);
    const LevyModel model = jmodel(params, standard);
    const double kappa = jnum(params, "kappa", 2.0);
    const double theta = jnum(params, "theta", 0.0);
    std::vector<std::pair<double, double>> schedule;
    for (double x : jvec(params, "xs", {100.0, 1000.0, 10000.0}))
      schedule.emplace_back(
          x, psi1(model, kappa) * x + theta * std::sqrt(psi2(model, kappa) * x));
    return verify_truncated_moments(model, kappa, 1, schedule, opts,
                                    jnum(params, "tolerance", 1e-10));
  }
  if (name == "truncated-moment-part2" || name == "truncated-moment-part3") {
    require_keys(params,
                 {"model", "kappa", "saddle", "xs", "tolerance", "replicates"},
                 name);
    const int part = name.back() == '2' ? 2 : 3;
    const LevyModel model = jmodel(params, standard);
    const double kappa = jnum(params, "kappa", 2.0);
    const double saddle = jnum(params, "saddle", part == 2 ? 3.0 : 1.0);
    std::vector<std::pair<double, double>> schedule;
    for (double x : jvec(params, "xs", {25.0, 100.0, 400.0}))
      schedule.emplace_back(x, psi1(model, saddle) * x);
    return verify_truncated_moments(model, kappa, part, schedule, opts,
                                    jnum(params, "tolerance", 0.05));
  }
  if (name == "bahadur-rao") {
    require_keys(params,
                 {"model", "beta", "horizons", "tolerances", "replicates"}, name);
    return verify_bahadur_rao(jmodel(params, standard), jnum(params, "beta", 1.0),
                              jvec(params, "horizons", {25.0, 100.0, 400.0}),
                              jvec(params, "tolerances", {0.1, 0.02, 0.005}),
                              opts);
  }
  if (name == "order-stats") {
    require_keys(params,
                 {"model", "lambda", "N", "R", "taus", "hill_k", "hill_tolerance",
                  "sigma_band", "top_k", "kappa", "moment_tau"},
                 name);
    EnsembleSpec spec;
    spec.model = jmodel(params, standard);
    spec.rule = GrowthRule::proportional(jnum(params, "lambda", 0.125));
    spec.N = jint(params, "N", 100000);
    spec.replicates = jint(params, "R", 2000);
    spec.grid = {0.0};
    spec.seed = seed;
    spec.threads = threads;
    spec.budget = budget;
    OrderStatsOptions os;
    os.taus = jvec(params, "taus", {0.5, 1.0, 4.0});
    os.moments = {{jnum(params, "kappa", 0.25), jnum(params, "moment_tau", 1.0)}};
    os.hill_k = static_cast<int>(jint(params, "hill_k", 100));
    os.hill_tolerance = jnum(params, "hill_tolerance", 0.1);
    os.sigma_band = jnum(params, "sigma_band", 3.0);
    os.top_k = static_cast<int>(jint(params, "top_k", 64));
    return verify_order_stats(spec, os);
  }
  if (name == "critical-variance") {
    require_keys(params, {"model", "theta", "s", "R", "threshold", "tolerance"},
                 name);
    return verify_critical_variance(
        jmodel(params, standard), jnum(params, "theta", 0.0),
        jnum(params, "s", 6.0), jint(params, "R", 500), opts,
        jnum(params, "threshold", 1.0), jnum(params, "tolerance", 0.1));
  }
  if (name == "slow-gaussian") {
    require_keys(params,
                 {"model", "lambda", "N", "R", "grid", "ks_p_floor",
                  "corr_tolerance"},
                 name);
    EnsembleSpec spec;
    spec.model = jmodel(params, standard);
    spec.rule = GrowthRule::proportional(jnum(params, "lambda", 4.0));
    spec.N = jint(params, "N", 65536);
    spec.replicates = jint(params, "R", 2000);
    spec.grid = jvec(params, "grid", {0.0, 0.5});
    spec.seed = seed;
    spec.threads = threads;
    spec.budget = budget;
    return verify_slow_gaussian(spec, jnum(params, "ks_p_floor", 1e-3),
                                jnum(params, "corr_tolerance", 0.03));
  }
  if (name == "stable-marginal") {
    require_keys(params, {"model", "tau", "samples", "ks_p_floor"}, name);
    return verify_stable_marginal(jmodel(params, standard),
                                  jnum(params, "tau", 1e-6),
                                  jint(params, "samples", 5000), opts,
                                  jnum(params, "ks_p_floor", 1e-3));
  }
  if (name == "stable-residual") {
    require_keys(params, {"model", "alpha", "tau", "runs", "tolerance"}, name);
    return verify_stable_residual(jmodel(params, standard),
                                  jnum(params, "alpha", 0.5),
                                  jnum(params, "tau", 0.01),
                                  jint(params, "runs", 10000), opts,
                                  jnum(params, "tolerance", 0.01));
  }
  if (name == "ou-stationarity") {
    require_keys(params,
                 {"model", "dt", "steps", "var_tolerance", "corr_tolerance"},
                 name);
    return verify_ou_stationarity(
        jmodel(params, standard), jnum(params, "dt", 0.1),
        jint(params, "steps", 1000000), opts,
        jnum(params, "var_tolerance", 0.01), jnum(params, "corr_tolerance", 0.01));
  }
  if (name == "partition-mean") {
    require_keys(params, {"beta", "n", "R", "sigma_band"}, name);
    return verify_partition_mean(jnum(params, "beta", 0.4),
                                 static_cast<int>(jint(params, "n", 16)),
                                 jint(params, "R", 200), opts,
                                 jnum(params, "sigma_band", 4.0));
  }
  throw ConfigError("verify: unknown check '" + name + "'");
}

RunResult run_config(RunConfig cfg) {
  RunResult result;
  try {
    if (!cfg.seed) {
      std::random_device rd;
      cfg.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
    const nlohmann::json canonical = cfg.to_json();
    const std::string spec_hash = sha256_hex(canonical.dump());

    ArtifactSet artifacts;
    artifacts.dir = cfg.out_dir;
    fs::create_directories(artifacts.dir);
    artifacts.put("config.resolved.json", canonical.dump(2) + "\n");

    result.summary["command"] = cfg.command;
    result.summary["seed"] = *cfg.seed;
    result.summary["spec_sha256"] = spec_hash;

    if (cfg.command == "classify")
      run_classify(cfg, spec_hash, artifacts, result);
    else if (cfg.command == "rate")
      run_rate(cfg, spec_hash, artifacts, result);
    else if (cfg.command == "simulate")
      run_simulate(cfg, spec_hash, artifacts, result);
    else if (cfg.command == "limit-sample")
      run_limit_sample(cfg, spec_hash, artifacts, result);
    else if (cfg.command == "verify")
      run_verify(cfg, spec_hash, artifacts, result);
    else if (cfg.command == "rem-preset")
      run_rem_preset(cfg, spec_hash, artifacts, result);
    else
      throw ConfigError("unknown command '" + cfg.command + "'");

    result.summary["artifacts"] = artifacts.files;
    result.summary["out_dir"] = artifacts.dir.string();
  } catch (const ConfigError& e) {
    result.exit_code = 2;
    result.summary["error"] = e.what();
  } catch (const BudgetError& e) {
    result.exit_code = 4;
    result.summary["error"] = e.what();
  } catch (const std::invalid_argument& e) {
    result.exit_code = 3;
    result.summary["error"] = e.what();
  } catch (const std::domain_error& e) {
    result.exit_code = 3;
    result.summary["error"] = e.what();
  } catch (const std::exception& e) {
    result.exit_code = 3;
    result.summary["error"] = e.what();
  }
  return result;
}

}  // namespace levysum
