// Copyright 2026 the levysum authors
// SPDX-License-Identifier: Apache-2.0

#include "levysum/rate_function.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace levysum {
namespace {

std::string interval_text(const LevyModel& m) {
  const double b0 = beta0(m);
  const double bi = beta_inf(m);
  char buf[128];
  if (std::isinf(bi))
    std::snprintf(buf, sizeof buf, "[%g, +inf)", b0);
  else
    std::snprintf(buf, sizeof buf, "[%g, %g)", b0, bi);
  return buf;
}

// g(u) = u psi'(u) - psi(u) = I(psi'(u)); strictly increasing on (0,inf)
// with g(0) = 0 and g'(u) = u psi''(u).
double g_of_u(const LevyModel& m, double u) {
  const Cumulant c = eval_cumulant(m, u);
  return u * c.dpsi - c.psi;
}

}  // namespace

double solve_saddle_point(const RateProfile& profile, double beta) {
  const LevyModel& m = profile.model;
  const double b0 = beta0(m);
  const double bi = beta_inf(m);
  if (!(beta >= b0) || !(beta < bi))
    throw std::domain_error("rate function argument " + std::to_string(beta) +
                            " outside admissible interval " + interval_text(m));
  if (beta == b0) return 0.0;

  double lo = 0.0, hi = 1.0;
  while (eval_cumulant(m, hi).dpsi < beta) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e9 || !std::isfinite(eval_cumulant(m, hi).psi))
      throw std::domain_error("failed to bracket psi'(u) = " +
                              std::to_string(beta) + "; admissible interval " +
                              interval_text(m));
  }
  double u = 0.5 * (lo + hi);
  for (int it = 0; it < profile.max_iter; ++it) {
    const Cumulant c = eval_cumulant(m, u);
    const double f = c.dpsi - beta;
    if (f > 0.0)
      hi = u;
    else
      lo = u;
    double step = f / c.ddpsi;
    double next = u - step;
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);  // bisect
    const double delta = std::abs(next - u);
    u = next;
    if (delta <= profile.tol * (1.0 + std::abs(u))) break;
  }
  return u;
}

RateValue rate_eval(const RateProfile& profile, double beta) {
  const double u = solve_saddle_point(profile, beta);
  const Cumulant c = eval_cumulant(profile.model, u);
  RateValue r;
  r.u = u;
  r.derivative = u;
  r.value = u * beta - c.psi;
  if (r.value < 0.0 && r.value > -1e-15) r.value = 0.0;  // roundoff at beta0
  return r;
}

double rate_inverse(const RateProfile& profile, double y) {
  const LevyModel& m = profile.model;
  if (!(y >= 0.0))
    throw std::domain_error("rate inverse requires y >= 0, got " + std::to_string(y));
  if (!(y < sup_rate(m)))
    throw std::domain_error("rate inverse argument " + std::to_string(y) +
                            " is at or above sup I = " +
                            std::to_string(sup_rate(m)) + " for this model");
  if (y == 0.0) return beta0(m);

  double lo = 0.0, hi = 1.0;
  while (g_of_u(m, hi) < y) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e9 || !std::isfinite(g_of_u(m, hi)))
      throw std::domain_error("rate inverse argument " + std::to_string(y) +
                              " is at or above sup I for this model");
  }
  double u = 0.5 * (lo + hi);
  for (int it = 0; it < profile.max_iter; ++it) {
    const Cumulant c = eval_cumulant(m, u);
    const double f = u * c.dpsi - c.psi - y;
    if (f > 0.0)
      hi = u;
    else
      lo = u;
    const double slope = u * c.ddpsi;  // vanishes at u = 0, so keep the bracket
    double next = slope > 0.0 ? u - f / slope : 0.5 * (lo + hi);
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    const double delta = std::abs(next - u);
    u = next;
    if (delta <= profile.tol * (1.0 + std::abs(u))) break;
  }
  const double beta = eval_cumulant(m, u).dpsi;
  // When sup I is finite, y at (or numerically indistinguishable from) the
  // supremum drives psi'(u) into its limit; the preimage does not exist.
  if (!(beta < beta_inf(m)))
    throw std::domain_error("rate inverse argument " + std::to_string(y) +
                            " is at or above sup I for this model");
  return beta;
}

CriticalPoints critical_points(const RateProfile& profile) {
  const Cumulant c1 = eval_cumulant(profile.model, 1.0);
  const Cumulant c2 = eval_cumulant(profile.model, 2.0);
  return {c1.dpsi - c1.psi, 2.0 * c2.dpsi - c2.psi};
}

double solve_alpha(const RateProfile& profile, double lambda) {
  const double l2 = critical_points(profile).lambda2;
  if (!(lambda > 0.0) || !(lambda < l2))
    throw std::domain_error("alpha equation requires lambda in (0, " +
                            std::to_string(l2) + "), got " + std::to_string(lambda));
  const LevyModel& m = profile.model;
  double lo = 0.0, hi = 2.0;  // g(2) = lambda2 > lambda
  double u = 0.5 * (lo + hi);
  for (int it = 0; it < profile.max_iter; ++it) {
    const Cumulant c = eval_cumulant(m, u);
    const double f = u * c.dpsi - c.psi - lambda;
    if (f > 0.0)
      hi = u;
    else
      lo = u;
    const double slope = u * c.ddpsi;
    double next = slope > 0.0 ? u - f / slope : 0.5 * (lo + hi);
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    const double delta = std::abs(next - u);
    u = next;
    if (delta <= profile.tol * (1.0 + std::abs(u))) break;
  }
  return u;
}

double tilted_rate(const RateProfile& profile, double beta, double kappa) {
  const RateValue r = rate_eval(profile, beta);
  return r.value + psi(profile.model, kappa) - kappa * beta;
}

}  // namespace levysum
