// Copyright 2026 the levysum authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "levysum/verify.hpp"

using namespace levysum;

namespace {
const LevyModel kBm = LevyModel::brownian(0.0, 1.0);
const LevyModel kCpg = LevyModel::compound_poisson_gauss(1.0, 0.0, 1.0, 0.0);
}  // namespace

TEST_CASE("check rows and report serialization") {
  CheckReport report;
  report.check = "demo";
  report.rows.push_back(CheckRow::make("a", 1.0, 1.005, 0.01));
  report.rows.push_back(CheckRow::make("b", 1.0, 2.0, 0.5));
  CHECK(report.rows[0].pass);
  CHECK_FALSE(report.rows[1].pass);
  CHECK_FALSE(report.pass());
  const nlohmann::json j = report.to_json();
  CHECK(j.at("check") == "demo");
  CHECK(j.at("pass") == false);
  CHECK(j.at("rows").size() == 2);
  // Pass decisions are recomputable from the stored fields.
  for (const auto& row : j.at("rows"))
    CHECK(row.at("pass").get<bool>() ==
          (std::abs(row.at("observed").get<double>() -
                    row.at("reference").get<double>()) <=
           row.at("tolerance").get<double>()));
}

TEST_CASE("truncated moment part 1: exact for Brownian, MC for jumps") {
  // Closed form against independently known digits of Phi.
  const std::vector<std::pair<double, double>> mk{
      {10000.0, 2.0 * 10000.0 - 100.0},  // theta = -1
      {10000.0, 2.0 * 10000.0},          // theta = 0
      {10000.0, 2.0 * 10000.0 + 100.0},  // theta = +1
  };
  const double phi[] = {0.15865525393145705, 0.5, 0.8413447460685429};
  for (int i = 0; i < 3; ++i) {
    const CheckReport r =
        verify_truncated_moments(kBm, 2.0, 1, {mk[i]}, McOptions{}, 1e-10);
    REQUIRE(r.rows.size() == 1);
    CHECK(std::abs(r.rows[0].observed - phi[i]) <= 1e-12);
    CHECK(r.rows[0].pass);
  }

  // Tilted Monte Carlo for the jump model approaches Phi(0) at large x.
  McOptions opts;
  opts.seed = 140;
  opts.replicates = 400000;
  const double x = 400.0;
  const CheckReport mc = verify_truncated_moments(
      kCpg, 1.0, 1, {{x, psi1(kCpg, 1.0) * x}}, opts, 0.012);
  CHECK(mc.pass());

  // Schedule violating the part-1 hypothesis is refused.
  CHECK_THROWS_AS(
      verify_truncated_moments(kBm, 2.0, 1, {{100.0, 10000.0}}, McOptions{}, 0.1),
      std::invalid_argument);
}

TEST_CASE("truncated moment parts 2 and 3: sharp tail ratios") {
  McOptions opts;
  opts.seed = 141;
  // Upper tail with saddle 3 > kappa = 2: ratio ~ 1 - 1/x.
  std::vector<std::pair<double, double>> schedule;
  for (double x : {25.0, 100.0, 400.0})
    schedule.emplace_back(x, psi1(kBm, 3.0) * x);
  const CheckReport p2 = verify_truncated_moments(kBm, 2.0, 2, schedule, opts, 0.05);
  CHECK(p2.pass());
  CHECK(std::abs(p2.rows.back().observed - (1.0 - 1.0 / 400.0)) < 1e-3);

  // Lower tail with saddle 1 < kappa = 2.
  std::vector<std::pair<double, double>> schedule3;
  for (double x : {25.0, 100.0, 400.0})
    schedule3.emplace_back(x, psi1(kBm, 1.0) * x);
  const CheckReport p3 = verify_truncated_moments(kBm, 2.0, 3, schedule3, opts, 0.05);
  CHECK(p3.pass());

  // The jump model goes through the saddle-tilted importance sampler.
  opts.replicates = 300000;
  const CheckReport p2mc = verify_truncated_moments(
      kCpg, 1.0, 2, {{200.0, psi1(kCpg, 2.0) * 200.0}}, opts, 0.08);
  CHECK(p2mc.pass());

  // Hypothesis checks.
  CHECK_THROWS_AS(
      verify_truncated_moments(kBm, 2.0, 2, {{100.0, psi1(kBm, 1.0) * 100.0}},
                               opts, 0.05),
      std::invalid_argument);
  CHECK_THROWS_AS(
      verify_truncated_moments(kBm, 2.0, 3, {{100.0, psi1(kBm, 3.0) * 100.0}},
                               opts, 0.05),
      std::invalid_argument);
  CHECK_THROWS_AS(verify_truncated_moments(kBm, 2.0, 4, {{1.0, 1.0}}, opts, 0.1),
                  std::invalid_argument);
}

TEST_CASE("sharp large-deviation prefactor") {
  const CheckReport r = verify_bahadur_rao(kBm, 1.0, {25.0, 100.0, 400.0},
                                           {0.05, 0.02, 0.005});
  CHECK(r.pass());
  REQUIRE(r.rows.size() == 4);
  // Frozen against high-precision digits of the Gaussian tail at T = 100:
  // ratio = sf(10) * sqrt(200 pi) * e^{50}.
  CHECK(r.rows[1].observed == doctest::Approx(0.990285).epsilon(2e-5));
  CHECK(r.rows[2].observed == doctest::Approx(0.997551).epsilon(2e-5));
  CHECK(r.rows.back().name == "improving-with-T");
  CHECK(r.rows.back().pass);

  // Importance-sampled route for the jump model.
  McOptions opts;
  opts.seed = 142;
  opts.replicates = 400000;
  const double beta = psi1(kCpg, 1.0);
  const CheckReport mc =
      verify_bahadur_rao(kCpg, beta, {25.0, 100.0}, {0.2, 0.05}, opts);
  CHECK(mc.pass());

  CHECK_THROWS_AS(verify_bahadur_rao(kBm, beta0(kBm), {100.0}, {0.1}),
                  std::invalid_argument);
}

TEST_CASE("covariance checks across the three modes") {
  McOptions opts;
  opts.seed = 143;
  const CheckReport raw =
      verify_covariance(kBm, {0.0, 1.0, 2.0}, CovarianceMode::RawExp, 400000, opts);
  CHECK(raw.pass());
  // The (1,2) entry is the pinned closed-form value.
  bool found = false;
  for (const CheckRow& row : raw.rows)
    if (row.name.find("cov(1.0") != std::string::npos &&
        row.name.find(",2.0") != std::string::npos) {
      CHECK(row.reference == doctest::Approx(7.7008048903654085).epsilon(1e-12));
      found = true;
    }
  CHECK(found);

  const CheckReport ou =
      verify_covariance(kBm, {0.0, 0.5}, CovarianceMode::Ou, 200000, opts);
  CHECK(ou.pass());
  for (const CheckRow& row : ou.rows)
    if (row.name == "cov(0.0,0.5)")
      CHECK(row.reference == doctest::Approx(std::exp(-0.25)).epsilon(1e-12));

  const CheckReport clt = verify_covariance(kBm, {0.0, 0.5, 1.0},
                                            CovarianceMode::CltGaussian, 100000,
                                            opts);
  CHECK(clt.pass());
}

TEST_CASE("critical-regime trimmed variance") {
  McOptions opts;
  opts.seed = 144;
  const CheckReport r = verify_critical_variance(kBm, 0.0, 4.0, 400, opts, 1.0, 0.15);
  CHECK(r.rows.size() == 1);
  CHECK(r.rows[0].reference == 0.5);
  CHECK(r.pass());
}

TEST_CASE("slow-regime gaussian marginal at reduced scale") {
  EnsembleSpec spec;
  spec.model = kBm;
  spec.rule = GrowthRule::proportional(4.0);
  spec.N = 4096;
  spec.replicates = 500;
  spec.grid = {0.0, 0.5};
  spec.seed = 145;
  const CheckReport r = verify_slow_gaussian(spec, 1e-3, 0.05);
  CHECK(r.pass());
}

TEST_CASE("stable marginal and residual checks at reduced scale") {
  McOptions opts;
  opts.seed = 146;
  const CheckReport marginal = verify_stable_marginal(kBm, 1e-5, 2000, opts);
  CHECK(marginal.pass());

  const CheckReport residual =
      verify_stable_residual(kBm, 0.5, 0.01, 3000, opts, 0.01);
  CHECK(residual.pass());
  CHECK(residual.rows[0].reference == doctest::Approx(0.1).epsilon(1e-12));

  CHECK_THROWS_AS(verify_stable_residual(kBm, 1.5, 0.01, 100, opts, 0.1),
                  std::invalid_argument);
}

TEST_CASE("ou stationarity check") {
  McOptions opts;
  opts.seed = 147;
  const CheckReport r = verify_ou_stationarity(kBm, 0.1, 200000, opts, 0.02, 0.02);
  CHECK(r.pass());
}

TEST_CASE("order statistics checks at reduced scale") {
  EnsembleSpec spec;
  spec.model = kBm;
  spec.rule = GrowthRule::proportional(0.125);
  spec.N = 20000;
  spec.replicates = 500;
  spec.grid = {0.0};
  spec.seed = 148;
  OrderStatsOptions os;
  os.taus = {0.5, 1.0, 4.0};
  os.moments = {{0.25, 1.0}};
  os.hill_k = 50;
  os.hill_tolerance = 0.2;
  os.sigma_band = 4.0;
  const CheckReport r = verify_order_stats(spec, os);
  INFO(r.to_json().dump(2));
  CHECK(r.pass());
  CHECK(r.params.contains("finite_size_reference"));

  EnsembleSpec slow = spec;
  slow.rule = GrowthRule::proportional(4.0);
  CHECK_THROWS_AS(verify_order_stats(slow, os), std::invalid_argument);
}

TEST_CASE("partition preset mean") {
  McOptions opts;
  opts.seed = 149;
  const CheckReport r = verify_partition_mean(0.4, 16, 200, opts);
  CHECK(r.pass());
  CHECK(r.params.at("regime") == "slow");
  // N e^{beta^2 n / 2} with beta = 0.4, n = 16.
  CHECK(r.rows[0].reference ==
        doctest::Approx(65536.0 * std::exp(0.08 * 16.0)).epsilon(1e-12));
}
