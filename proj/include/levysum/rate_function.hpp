// Copyright 2026 the levysum authors
// SPDX-License-Identifier: Apache-2.0
//
// Legendre-Fenchel rate function of the cumulant psi. Everything is
// parametrized through the saddle point u: I(psi'(u)) = u psi'(u) - psi(u)
// for u >= 0, and I'(psi'(u)) = u. psi' is a smooth strictly increasing
// bijection from [0,inf) onto [beta0, beta_inf), so evaluation reduces to a
// safeguarded Newton solve that cannot miss.

#pragma once

#include "levysum/levy_model.hpp"

namespace levysum {

struct RateProfile {
  LevyModel model;
  double tol = 1e-12;  // relative tolerance on the saddle point u
  int max_iter = 100;

  explicit RateProfile(LevyModel m) : model(std::move(m)) { model.validate(); }
};

struct RateValue {
  double value = 0.0;       // I(beta)
  double derivative = 0.0;  // I'(beta) = u(beta)
  double u = 0.0;           // saddle point solving psi'(u) = beta
};

// I, I' and the saddle point at beta in [beta0, beta_inf). Throws
// std::domain_error outside that interval.
RateValue rate_eval(const RateProfile& profile, double beta);

// Inverse of I on [0, sup I): returns beta with I(beta) = y, obtained by
// solving g(u) = u psi'(u) - psi(u) = y and mapping back through psi'.
double rate_inverse(const RateProfile& profile, double y);

struct CriticalPoints {
  double lambda1 = 0.0;  // I(psi'(1)) = psi'(1) - psi(1)
  double lambda2 = 0.0;  // I(psi'(2)) = 2 psi'(2) - psi(2)
};

CriticalPoints critical_points(const RateProfile& profile);

// Unique alpha in (0,2) with I(psi'(alpha)) = lambda, for lambda in
// (0, lambda2). alpha < 1 iff lambda < lambda1.
double solve_alpha(const RateProfile& profile, double lambda);

// Rate function of the kappa-tilted process: I~(beta) = I(beta) + psi(kappa)
// - kappa*beta.
double tilted_rate(const RateProfile& profile, double beta, double kappa);

// Solves psi'(u) = beta for u >= 0 (shared with the regime machinery).
double solve_saddle_point(const RateProfile& profile, double beta);

}  // namespace levysum
