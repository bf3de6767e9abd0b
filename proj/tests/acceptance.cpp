// Copyright 2026 the levysum authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one numbered criterion per run with a single PASS/FAIL
// line each. Every tolerance is pinned here in code. All randomized
// criteria use the fixed project seed so reruns are bit-identical.
//
// Usage: acceptance [criterion-number ...]   (no arguments = run all)

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "levysum/io.hpp"
#include "levysum/rate_function.hpp"
#include "levysum/runner.hpp"
#include "levysum/verify.hpp"

using namespace levysum;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20260808ULL;

struct Checker {
  bool ok = true;
  std::vector<std::string> notes;

  void expect(bool condition, const std::string& detail) {
    if (!condition) {
      ok = false;
      notes.push_back("FAILED: " + detail);
    }
  }
  void note(const std::string& detail) { notes.push_back(detail); }
  void expect_rows(const CheckReport& report) {
    for (const CheckRow& row : report.rows) {
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s/%s: observed=%.6g reference=%.6g tol=%.3g",
                    report.check.c_str(), row.name.c_str(), row.observed,
                    row.reference, row.tolerance);
      if (row.pass)
        notes.push_back(std::string("ok     ") + buf);
      else {
        ok = false;
        notes.push_back(std::string("FAILED ") + buf);
      }
    }
  }
};

const LevyModel kBm = LevyModel::brownian(0.0, 1.0);
const LevyModel kPois = LevyModel::compound_poisson_gauss(1.0, 1.0, 0.0, 0.0);

// 1. Rate-function exactness for both model families.
void criterion_1(Checker& c) {
  for (const LevyModel& m : {kBm, kPois}) {
    const RateProfile p(m);
    for (int i = 0; i < 40; ++i) {
      const double u = 0.1 + (4.0 - 0.1) * i / 39.0;
      const Cumulant cu = eval_cumulant(m, u);
      const RateValue r = rate_eval(p, cu.dpsi);
      c.expect(std::abs(r.value - (u * cu.dpsi - cu.psi)) <= 1e-10,
               "conjugacy at u=" + std::to_string(u) + " for " + m.describe());
      c.expect(std::abs(r.derivative - u) <= 1e-8,
               "derivative identity at u=" + std::to_string(u) + " for " +
                   m.describe());
    }
    const double y_max = rate_eval(p, psi1(m, 4.0)).value;
    for (int i = 0; i < 40; ++i) {
      const double y = y_max * std::pow(10.0, -6.0 * (39 - i) / 39.0);
      const double round_trip = rate_eval(p, rate_inverse(p, y)).value;
      c.expect(std::abs(round_trip - y) <= 1e-9 * (1.0 + y),
               "inverse round trip at y=" + std::to_string(y) + " for " +
                   m.describe());
    }
  }
}

// 2. Critical points of the standard Brownian model.
void criterion_2(Checker& c) {
  const auto [l1, l2] = critical_points(RateProfile(kBm));
  c.expect(std::abs(l1 - 0.5) <= 1e-12, "lambda1 = 0.5");
  c.expect(std::abs(l2 - 2.0) <= 1e-12, "lambda2 = 2.0");
  char buf[128];
  std::snprintf(buf, sizeof buf, "lambda1=%.17g lambda2=%.17g", l1, l2);
  c.note(buf);
}

// 3. Truncated exponential moments, part 1: closed form to 1e-10 and
// tilted Monte Carlo within 3 standard errors at 1e6 replicates.
void criterion_3(Checker& c) {
  const double x = 10000.0;
  const double phi[] = {0.15865525393145705, 0.5, 0.8413447460685429};
  const double thetas[] = {-1.0, 0.0, 1.0};
  for (int i = 0; i < 3; ++i) {
    const double b = psi1(kBm, 2.0) * x + thetas[i] * std::sqrt(psi2(kBm, 2.0) * x);
    const TruncatedMoment exact =
        truncated_exp_moment(kBm, 2.0, x, b, TruncMethod::ClosedForm);
    c.expect(std::abs(exact.normalized - phi[i]) <= 1e-10,
             "closed form at theta=" + std::to_string(thetas[i]));
    const TruncatedMoment mc = truncated_exp_moment(
        kBm, 2.0, x, b, TruncMethod::TiltedMC, 1000000, kSeed + i, 0);
    c.expect(mc.stderr_normalized > 0.0, "MC standard error reported");
    c.expect(std::abs(mc.normalized - exact.normalized) <= 3.0 * mc.stderr_normalized,
             "tilted MC within 3 stderr at theta=" + std::to_string(thetas[i]));
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "theta=%+.0f closed=%.12f mc=%.6f (se %.2g)", thetas[i],
                  exact.normalized, mc.normalized, mc.stderr_normalized);
    c.note(buf);
  }
}

// 4. Sharp large-deviation prefactor for the Gaussian tail.
void criterion_4(Checker& c) {
  const CheckReport r =
      verify_bahadur_rao(kBm, 1.0, {25.0, 100.0, 400.0},
                         {std::numeric_limits<double>::infinity(), 0.02, 0.005});
  c.expect_rows(r);
}

// 5. Slow regime: Gaussian marginal and OU lag correlation.
void criterion_5(Checker& c) {
  EnsembleSpec spec;
  spec.model = kBm;
  spec.rule = GrowthRule::proportional(4.0);
  spec.N = 65536;
  spec.replicates = 2000;
  spec.grid = {0.0, 0.5};
  spec.seed = kSeed;
  const CheckReport r = verify_slow_gaussian(spec, 1e-3, 0.03);
  c.expect_rows(r);
  c.note("ks p-value = " + r.params.at("normal_ks_p").dump());
}

// 6. Critical regime: the below-threshold variance reproduces Phi(0) = 1/2.
void criterion_6(Checker& c) {
  McOptions opts;
  opts.seed = kSeed;
  const CheckReport r = verify_critical_variance(kBm, 0.0, 6.0, 500, opts, 1.0, 0.1);
  c.expect_rows(r);
  c.note("N = " + r.params.at("N").dump());
}

// 7. Fast regime: Hill index, Frechet law of the maximum, tail counts.
void criterion_7(Checker& c) {
  EnsembleSpec spec;
  spec.model = kBm;
  spec.rule = GrowthRule::proportional(0.125);
  spec.N = 100000;
  spec.replicates = 2000;
  spec.grid = {0.0};
  spec.seed = kSeed;
  OrderStatsOptions os;
  os.taus = {0.5, 1.0, 4.0};
  os.moments = {};
  os.hill_k = 100;
  os.hill_tolerance = 0.1;  // alpha-hat in [0.4, 0.6]
  os.sigma_band = 3.0;
  const CheckReport r = verify_order_stats(spec, os);
  c.expect_rows(r);
  c.note("frechet ks p = " + r.params.at("frechet_ks_p").dump());
  c.note("finite-size tail references: " +
         r.params.at("finite_size_reference").dump());
}

// 8. Stable series sampler: marginal law at the origin and discarded mass.
void criterion_8(Checker& c) {
  McOptions opts;
  opts.seed = kSeed;
  const CheckReport marginal = verify_stable_marginal(kBm, 1e-6, 5000, opts, 1e-3);
  c.expect_rows(marginal);
  c.note("stable ks p = " + marginal.params.at("ks_p").dump());
  const CheckReport residual = verify_stable_residual(kBm, 0.5, 0.01, 10000, opts, 0.01);
  c.expect_rows(residual);
}

// 9. Truncated-moment limit of the scaled summands:
// N E[W^kappa 1{W > tau}] -> (alpha/(alpha-kappa)) tau^{kappa-alpha}.
void criterion_9(Checker& c) {
  EnsembleSpec spec;
  spec.model = kBm;
  spec.rule = GrowthRule::proportional(0.125);
  spec.N = 100000;
  spec.replicates = 500;
  spec.grid = {0.0};
  spec.seed = kSeed + 9;
  OrderStatsOptions os;
  os.taus = {};
  os.moments = {{0.25, 1.0}};
  os.hill_k = -1;  // skip the Hill row here
  os.check_frechet = false;
  os.sigma_band = 3.0;
  const CheckReport r = verify_order_stats(spec, os);
  c.expect_rows(r);
}

// 10. Determinism: byte-identical artifacts across reruns and worker counts.
void criterion_10(Checker& c) {
  const std::string sim_text = R"({
    "command": "simulate",
    "model": {"kind": "brownian", "mu": 0.0, "sigma": 1.0},
    "growth": {"kind": "proportional", "lambda": 0.125},
    "ensemble": {"N": 4096, "R": 50, "grid": [0.0, 0.5], "top_k": 8},
    "seed": 20260808
  })";
  const std::string limit_text = R"({
    "command": "limit-sample",
    "model": {"kind": "brownian", "mu": 0.0, "sigma": 1.0},
    "limit": {"process": "stable", "alpha": 0.5, "tau": 0.001, "grid": [0.0, 1.0], "runs": 200},
    "seed": 20260808
  })";
  const fs::path base = fs::temp_directory_path() / "levysum_acceptance_det";
  fs::remove_all(base);
  int variant = 0;
  for (const std::string& text : {sim_text, limit_text}) {
    nlohmann::json artifacts[3];
    const int threads[3] = {1, 8, 1};  // rerun with 1 worker closes the loop
    for (int i = 0; i < 3; ++i) {
      RunConfig cfg = load_config(text);
      cfg.out_dir = (base / ("v" + std::to_string(variant) + "_" +
                             std::to_string(i)))
                        .string();
      cfg.threads = threads[i];
      const RunResult r = run_config(cfg);
      c.expect(r.exit_code == 0, "run exits cleanly");
      artifacts[i] = r.summary.at("artifacts");
    }
    c.expect(artifacts[0] == artifacts[1],
             "1-worker and 8-worker artifact hashes match");
    c.expect(artifacts[0] == artifacts[2], "rerun artifact hashes match");
    c.note("variant " + std::to_string(variant) +
           " hashes: " + artifacts[0].dump());
    ++variant;
  }
}

// 11. Limit samplers: OU stationarity bands and the CLT covariance matrix.
void criterion_11(Checker& c) {
  McOptions opts;
  opts.seed = kSeed;
  const CheckReport ou = verify_ou_stationarity(kBm, 0.1, 1000000, opts, 0.01, 0.01);
  c.expect_rows(ou);
  const CheckReport clt =
      verify_covariance(kBm, {0.0, 0.5, 1.0}, CovarianceMode::CltGaussian,
                        100000, opts, 4.0);
  c.expect_rows(clt);
}

struct Criterion {
  int id;
  const char* title;
  std::function<void(Checker&)> body;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "rate-function exactness (conjugacy, derivative, inverse)", criterion_1},
      {2, "critical points (0.5, 2.0) for standard Brownian motion", criterion_2},
      {3, "truncated exponential moments, part 1", criterion_3},
      {4, "sharp large-deviation prefactor ratios", criterion_4},
      {5, "slow regime: Gaussian marginal and lag correlation", criterion_5},
      {6, "critical regime: trimmed variance -> Phi(0)", criterion_6},
      {7, "fast regime: Hill, Frechet maximum, tail counts", criterion_7},
      {8, "stable series: marginal law and discarded mass", criterion_8},
      {9, "fast regime: truncated kappa-moment limit", criterion_9},
      {10, "determinism: byte-identical artifacts", criterion_10},
      {11, "limit samplers: OU bands and CLT covariance", criterion_11},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (const Criterion& criterion : criteria()) {
    if (!selected.empty() &&
        std::find(selected.begin(), selected.end(), criterion.id) == selected.end())
      continue;
    Checker checker;
    std::string error;
    try {
      criterion.body(checker);
    } catch (const std::exception& e) {
      checker.ok = false;
      error = e.what();
    }
    std::printf("[%s] criterion %d: %s\n", checker.ok ? "PASS" : "FAIL",
                criterion.id, criterion.title);
    for (const std::string& note : checker.notes)
      std::printf("         %s\n", note.c_str());
    if (!error.empty()) std::printf("         exception: %s\n", error.c_str());
    if (!checker.ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
