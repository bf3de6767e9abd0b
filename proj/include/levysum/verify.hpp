// Copyright 2026 the levysum authors
// SPDX-License-Identifier: Apache-2.0
//
// Statistical checks that confront simulation output with closed forms and
// asymptotic references: truncated exponential moments, the sharp
// (Bahadur-Rao) large-deviation prefactor, order-statistics/tail limits in
// the fast regime, covariance identities, and the limit-marginal laws.

#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "levysum/limit_processes.hpp"
#include "levysum/montecarlo.hpp"
#include "levysum/stats.hpp"

namespace levysum {

// One scalar comparison; pass is recomputable as |observed - reference| <=
// tolerance from the stored fields alone.
struct CheckRow {
  std::string name;
  double observed = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  double stderr_value = std::numeric_limits<double>::quiet_NaN();
  bool pass = false;

  static CheckRow make(std::string name, double observed, double reference,
                       double tolerance,
                       double se = std::numeric_limits<double>::quiet_NaN());
};

struct CheckReport {
  std::string check;
  nlohmann::json params;
  std::vector<CheckRow> rows;

  bool pass() const;
  nlohmann::json to_json() const;
};

struct McOptions {
  std::uint64_t seed = 0;
  int threads = 0;
  std::int64_t replicates = 1000000;
};

// Truncated exponential moment asymptotics. part 1 compares the normalized
// lower-truncated moment against Phi(theta_N); parts 2/3 compare the sharp
// upper/lower tail forms e^{kappa b}/(|a-kappa| sqrt(2 pi psi''(a) x))
// e^{-I(b/x)x} with a the saddle point of b/x. Schedules must satisfy the
// part's hypotheses (b/x near psi'(kappa) for part 1, above for part 2,
// below for part 3), otherwise a std::invalid_argument is raised.
CheckReport verify_truncated_moments(
    const LevyModel& model, double kappa, int part,
    const std::vector<std::pair<double, double>>& schedule_x_b,
    const McOptions& opts = {}, double final_tolerance = 0.05);

// P[xi(T) >= beta T] against e^{-I(beta)T}/(alpha sqrt(2 pi psi''(alpha) T)).
// The probability side is the exact Gaussian tail for Brownian models and an
// exponentially tilted importance-sampling estimate otherwise. Ratios must
// improve with T and meet the per-T tolerances.
CheckReport verify_bahadur_rao(const LevyModel& model, double beta,
                               const std::vector<double>& horizons,
                               std::vector<double> tolerances = {},
                               const McOptions& opts = {});

struct OrderStatsOptions {
  std::vector<double> taus{0.5, 1.0, 4.0};
  // (kappa, tau) pairs for the truncated-moment limit (alpha/(alpha-kappa))
  // tau^{kappa-alpha}, kappa < alpha.
  std::vector<std::pair<double, double>> moments{{0.25, 1.0}};
  bool check_frechet = true;
  int hill_k = 0;  // 0: default k, negative: skip the Hill row
  double hill_tolerance = 0.1;
  double sigma_band = 3.0;
  int top_k = 64;
};

// Fast-regime ensemble order statistics: Frechet law of the top summand,
// tail counts N P[W > tau] -> tau^{-alpha}, truncated kappa-moments, and the
// Hill index of the normalized marginals.
CheckReport verify_order_stats(const EnsembleSpec& spec,
                               const OrderStatsOptions& opts = {});

enum class CovarianceMode { RawExp, Ou, CltGaussian };

// Empirical covariance of e^{xi}, the OU sampler, or the CLT Gaussian
// sampler against the matching closed form, within sigma_band empirical
// standard errors per entry.
CheckReport verify_covariance(const LevyModel& model,
                              const std::vector<double>& grid,
                              CovarianceMode mode, std::int64_t samples,
                              const McOptions& opts = {},
                              double sigma_band = 4.0);

// Critical regime: the variance of the below-threshold part of the
// normalized sum converges to Phi(theta). Computed by subtracting the
// scaled summands above `threshold` (taken from the per-replicate top-k)
// from each normalized replicate value.
CheckReport verify_critical_variance(const LevyModel& model, double theta,
                                     double s, std::int64_t replicates,
                                     const McOptions& opts = {},
                                     double threshold = 1.0,
                                     double tolerance = 0.1);

// Slow regime: normalized marginal is standard normal (KS) and the lag
// correlation matches exp((psi(1)-psi(2)/2) delta).
CheckReport verify_slow_gaussian(const EnsembleSpec& spec, double ks_p_floor = 1e-3,
                                 double corr_tolerance = 0.03);

// Marginal law of the truncated stable series at t = 0 for alpha = 1/2,
// where the series sums to a one-sided stable law with explicit cdf
// erfc(sqrt(pi/(4x))).
CheckReport verify_stable_marginal(const LevyModel& model, double tau,
                                   std::int64_t samples,
                                   const McOptions& opts = {},
                                   double ks_p_floor = 1e-3);

// Mean mass discarded below tau against the Campbell integral
// alpha tau^{1-alpha}/(1-alpha) (alpha < 1).
CheckReport verify_stable_residual(const LevyModel& model, double alpha,
                                   double tau, std::int64_t runs,
                                   const McOptions& opts = {},
                                   double tolerance = 0.01);

// Long-run OU marginal variance and lag-1 correlation.
CheckReport verify_ou_stationarity(const LevyModel& model, double dt,
                                   std::int64_t steps, const McOptions& opts = {},
                                   double var_tolerance = 0.01,
                                   double corr_tolerance = 0.01);

// Partition-function preset: mean of Z_N(0) with s = beta^2 n, N = 2^n
// against N e^{psi(1) s} within sigma_band exact standard errors.
CheckReport verify_partition_mean(double beta, int n, std::int64_t replicates,
                                  const McOptions& opts = {},
                                  double sigma_band = 4.0);

}  // namespace levysum
