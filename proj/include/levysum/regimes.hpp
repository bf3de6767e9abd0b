// Copyright 2026 the levysum authors
// SPDX-License-Identifier: Apache-2.0
//
// Growth rules s_N, regime classification against the critical points
// lambda1 < lambda2, exact finite-N moments of Z_N(t), and the centering /
// scaling sequences A_N(t), B_N(t) used in the fast-growth regime.

#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "levysum/rate_function.hpp"

namespace levysum {

struct GrowthRule {
  enum class Kind { Constant, Proportional, Critical, Table };

  Kind kind = Kind::Constant;
  double s = 0.0;       // Constant: s_N == s
  double lambda = 0.0;  // Proportional: s_N = log(N) / lambda
  // Critical: log N = lambda2 * s + 2 theta sqrt(psi''(2) s), N rounded.
  double theta = 0.0;
  double critical_s = 0.0;
  // Explicit (N, s_N) pairs, N strictly increasing, s_N >= 0.
  std::vector<std::pair<std::int64_t, double>> table;

  static GrowthRule constant(double s);
  static GrowthRule proportional(double lambda);
  static GrowthRule critical(double theta, double s);
  static GrowthRule explicit_table(std::vector<std::pair<std::int64_t, double>> t);

  void validate() const;
};

struct RegimeClass {
  enum class Kind { Zero, Slow, Critical, Fast };
  Kind kind = Kind::Zero;
  double theta = 0.0;   // critical regime
  double lambda = 0.0;  // fast regime: lim log N / s_N
  double alpha = 0.0;   // fast regime: I(psi'(alpha)) = lambda
  bool lattice_warning = false;

  const char* name() const;
};

RegimeClass classify(const LevyModel& model, const GrowthRule& rule);

// N implied by the critical rule at a chosen time horizon s (nearest
// integer; the o(sqrt(s)) slack in the growth condition absorbs rounding).
std::int64_t critical_rule_N(const LevyModel& model, double theta, double s);

// s_N for rules indexed by N; for the critical rule returns the rule's own
// horizon (N is derived, not free).
double growth_scale(const GrowthRule& rule, std::int64_t N);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

// Exact mean and variance of Z_N(t):
// mean = N e^{psi(1)(s+t)}, variance = N (e^{psi(2)(s+t)} - e^{2 psi(1)(s+t)}).
Moments moments_exact(const LevyModel& model, std::int64_t N, double s, double t);

// log B_N(t) = (psi(alpha)/alpha) t + s * Iinv((log N - log(alpha
// sqrt(2 pi psi''(alpha) s))) / s). Throws std::domain_error with a
// "larger N" hint when the Iinv argument falls outside [0, sup I).
double log_scaling_B(const LevyModel& model, double alpha, std::int64_t N,
                     double s, double t);
double scaling_B(const LevyModel& model, double alpha, std::int64_t N,
                 double s, double t);

struct TruncatedMoment {
  double value = 0.0;      // E[e^{kappa xi(x)} 1{xi(x) <= b}], may overflow to inf
  double log_value = 0.0;  // always finite representation
  double normalized = 0.0; // e^{-psi(kappa) x} * value, lies in [0,1]
  double stderr_normalized = 0.0;  // 0 for the closed form
};

enum class TruncMethod { ClosedForm, TiltedMC };

// Truncated exponential moment E[e^{kappa xi(x)} 1{xi(x) <= b}]. The closed
// form (Brownian only) is exp(psi(kappa)x) * Phi((b - psi'(kappa)x) /
// sqrt(psi''(kappa)x)); the Monte Carlo route samples the kappa-tilted
// process, whose law below b integrates to the same normalized value.
TruncatedMoment truncated_exp_moment(const LevyModel& model, double kappa,
                                     double x, double b, TruncMethod method,
                                     std::int64_t replicates = 1000000,
                                     std::uint64_t seed = 0, int threads = 0);

// A_N(t) for the fast regime: 0 below lambda1, the truncated-moment branch at
// lambda1, and e^{psi(1)t} E Z_N(0) between lambda1 and lambda2. The t<0
// correction l(t) B_N(t) with l(t) = (psi'(0)-psi'(1)) t 1_{t<0} is included.
double centering_A(const LevyModel& model, const RegimeClass& regime,
                   std::int64_t N, double s, double t,
                   std::uint64_t seed = 0, int threads = 0);

}  // namespace levysum
