// Copyright 2026 the levysum authors
// SPDX-License-Identifier: Apache-2.0
//
// Parametric Levy processes with closed-form cumulant analytics, exact
// increment/path sampling, and exponential tilting. Both families have a
// cumulant psi(u) = log E exp(u xi(1)) that is finite for every real u,
// which is what the rate-function machinery downstream requires.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "levysum/rng.hpp"

namespace levysum {

struct LevyModel {
  enum class Kind { BrownianMotion, CompoundPoissonGauss };

  Kind kind = Kind::BrownianMotion;
  // Brownian motion parameters: drift per unit time, volatility per sqrt-time.
  double mu = 0.0;
  double sigma = 1.0;
  // Compound Poisson with Gaussian jumps: jump rate, jump mean, jump sd,
  // plus a deterministic drift.
  double rate = 0.0;
  double jump_mean = 0.0;
  double jump_sd = 0.0;
  double drift = 0.0;

  static LevyModel brownian(double mu, double sigma);
  static LevyModel compound_poisson_gauss(double rate, double jump_mean,
                                          double jump_sd, double drift);

  // Jumps concentrated on a single point: increments live on an arithmetic
  // progression shifted by the drift.
  bool lattice() const {
    return kind == Kind::CompoundPoissonGauss && jump_sd == 0.0;
  }

  // Throws std::invalid_argument if xi(1) would be a.s. constant or a
  // parameter is out of range.
  void validate() const;

  std::string describe() const;
  bool operator==(const LevyModel&) const = default;
};

// psi(u), psi'(u), psi''(u) evaluated together.
struct Cumulant {
  double psi = 0.0;
  double dpsi = 0.0;
  double ddpsi = 0.0;
};

Cumulant eval_cumulant(const LevyModel& model, double u);

inline double psi(const LevyModel& m, double u) { return eval_cumulant(m, u).psi; }
inline double psi1(const LevyModel& m, double u) { return eval_cumulant(m, u).dpsi; }
inline double psi2(const LevyModel& m, double u) { return eval_cumulant(m, u).ddpsi; }

// beta0 = psi'(0) = E xi(1).
double beta0(const LevyModel& model);

// beta_inf = lim_{u->inf} psi'(u); +infinity is encoded as
// std::numeric_limits<double>::infinity() and consumers must branch on it.
double beta_inf(const LevyModel& model);

// sup of the rate function, lim_{u->inf} (u psi'(u) - psi(u)). Finite only
// for negative point jumps, where it equals the jump rate.
double sup_rate(const LevyModel& model);

// Exponential twist: the returned model has cumulant
// psi~(u) = psi(u + kappa) - psi(kappa).
LevyModel tilt(const LevyModel& model, double kappa);

// One increment of xi over a window of length t >= 0. Exact in law: Brownian
// draws one Gaussian; the compound family draws a Poisson jump count n and
// then the aggregated Gaussian jump sum n*m + s*sqrt(n)*Z.
double sample_increment(const LevyModel& model, double t, RngStream& gen);

// xi evaluated on a nondecreasing grid with t0 >= 0 (consecutive differences
// are independent increments over the gaps).
std::vector<double> sample_path(const LevyModel& model,
                                std::span<const double> grid, RngStream& gen);

}  // namespace levysum
