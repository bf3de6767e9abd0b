// Copyright 2026 the levysum authors
// SPDX-License-Identifier: Apache-2.0
//
// Exact samplers for the three limit objects: the central-limit Gaussian
// process on [0,T], the stationary Ornstein-Uhlenbeck process, and the
// completely asymmetric alpha-stable process built from a LePage / Poisson
// series of points U_i = Gamma_i^{-1/alpha} weighted by independent
// geometric Levy paths.

#pragma once

#include <cstdint>
#include <vector>

#include "levysum/levy_model.hpp"

namespace levysum {

struct GridSpec {
  std::vector<double> times;

  // Strictly increasing, finite. `nonnegative` additionally requires t0 >= 0.
  static GridSpec make(std::vector<double> times, bool nonnegative = false);
};

struct PoissonSeriesConfig {
  double tau = 0.0;        // truncation level for the Poisson points
  double tolerance = 0.0;  // alternatively: target sup-error bound
  bool by_tau = true;
  std::int64_t atom_cap = 10000000;

  static PoissonSeriesConfig with_truncation(double tau,
                                             std::int64_t cap = 10000000);
  static PoissonSeriesConfig with_tolerance(double eps,
                                            std::int64_t cap = 10000000);
};

// Stationary Gaussian path with unit marginal variance and lag covariance
// exp((psi(1) - psi(2)/2) |t2 - t1|), sampled by a stationary start plus the
// exact first-order autoregressive recursion. Grids may be two-sided.
std::vector<double> sample_ou(const LevyModel& model, const GridSpec& grid,
                              RngStream& gen);

// Zero-mean Gaussian vector with covariance
//   C(t1,t2) = e^{psi(2) t1 + psi(1)(t2-t1)} - e^{psi(1)(t1+t2)},  t1 <= t2,
// the covariance of e^{xi}. Factorized once; sample() is a matrix-vector
// product against fresh Gaussians.
class CltGaussianSampler {
 public:
  CltGaussianSampler(const LevyModel& model, const GridSpec& grid);
  std::vector<double> sample(RngStream& gen) const;
  const std::vector<double>& covariance_flat() const { return cov_; }
  std::size_t dim() const { return dim_; }

 private:
  std::size_t dim_ = 0;
  std::vector<double> cov_;     // row-major, for reference/checks
  std::vector<double> factor_;  // row-major square root of the covariance
};

std::vector<double> sample_clt_gaussian(const LevyModel& model,
                                        const GridSpec& grid, RngStream& gen);

// Descending Poisson points U_i = Gamma_i^{-1/alpha} above tau, where
// Gamma_i are unit-rate arrival times. Expected count is tau^{-alpha}.
std::vector<double> sample_poisson_points(RngStream& gen, double tau,
                                          double alpha,
                                          std::int64_t atom_cap = 10000000);

struct StableSeriesSample {
  std::vector<double> path;  // truncated series on the grid
  double error_bound = 0.0;  // residual_bound at the tau actually used
  double tau = 0.0;
  std::int64_t atom_count = 0;
};

// Truncated stable series on a nonnegative grid. Atoms are processed in
// descending U order; atom i's Levy path comes from substream (seed, run, i)
// so results are reproducible atom by atom. Regularizers by branch:
//   alpha in (0,1):  plain sum of U_i e^{xi_i(t) - (psi(alpha)/alpha) t}
//   alpha = 1:       the same sum minus log(1/tau)          (drift psi(1))
//   alpha in (1,2):  minus (alpha tau^{1-alpha}/(alpha-1)) e^{(psi(1)-psi(alpha)/alpha)t}
StableSeriesSample sample_stable_series(const LevyModel& model, double alpha,
                                        const GridSpec& grid,
                                        const PoissonSeriesConfig& cfg,
                                        std::uint64_t seed,
                                        std::uint64_t run_id = 0);

// First/second-moment bound on the sup-norm distance to the untruncated
// series over the grid: mean of the discarded mass for alpha < 1, standard
// deviation of the centered discarded mass for alpha in [1,2). Increasing
// in tau.
double residual_bound(const LevyModel& model, double alpha, double tau,
                      const GridSpec& grid);

// Largest tau whose residual_bound stays below eps (bisection).
double tau_for_tolerance(const LevyModel& model, double alpha, double eps,
                         const GridSpec& grid);

}  // namespace levysum
