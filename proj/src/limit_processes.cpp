// Copyright 2026 the levysum authors
// SPDX-License-Identifier: Apache-2.0

#include "levysum/limit_processes.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

#include "levysum/stats.hpp"

namespace levysum {

GridSpec GridSpec::make(std::vector<double> times, bool nonnegative) {
  if (times.empty()) throw std::invalid_argument("grid must not be empty");
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (!std::isfinite(times[j]))
      throw std::invalid_argument("grid times must be finite");
    if (j > 0 && !(times[j] > times[j - 1]))
      throw std::invalid_argument("grid times must be strictly increasing");
  }
  if (nonnegative && times.front() < 0.0)
    throw std::invalid_argument(
        "this sampler is defined on the nonnegative half-line only");
  return GridSpec{std::move(times)};
}

PoissonSeriesConfig PoissonSeriesConfig::with_truncation(double tau,
                                                         std::int64_t cap) {
  if (!(tau > 0.0)) throw std::invalid_argument("truncation tau must be > 0");
  PoissonSeriesConfig c;
  c.tau = tau;
  c.by_tau = true;
  c.atom_cap = cap;
  return c;
}

PoissonSeriesConfig PoissonSeriesConfig::with_tolerance(double eps,
                                                        std::int64_t cap) {
  if (!(eps > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  PoissonSeriesConfig c;
  c.tolerance = eps;
  c.by_tau = false;
  c.atom_cap = cap;
  return c;
}

std::vector<double> sample_ou(const LevyModel& model, const GridSpec& grid,
                              RngStream& gen) {
  const double decay = psi(model, 2.0) / 2.0 - psi(model, 1.0);
  if (!(decay > 0.0))
    throw std::logic_error("psi(2)/2 - psi(1) must be positive (strict convexity)");
  std::vector<double> out(grid.times.size());
  double x = gen.gaussian();  // stationary start, unit variance
  out[0] = x;
  for (std::size_t j = 1; j < grid.times.size(); ++j) {
    const double rho = std::exp(-decay * (grid.times[j] - grid.times[j - 1]));
    x = rho * x + std::sqrt(1.0 - rho * rho) * gen.gaussian();
    out[j] = x;
  }
  return out;
}

CltGaussianSampler::CltGaussianSampler(const LevyModel& model,
                                       const GridSpec& grid) {
  if (grid.times.front() < 0.0)
    throw std::invalid_argument("the central-limit Gaussian lives on t >= 0");
  const double p1 = psi(model, 1.0);
  const double p2 = psi(model, 2.0);
  dim_ = grid.times.size();
  Eigen::MatrixXd c(dim_, dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double t1 = grid.times[j];  // t1 <= t2
      const double t2 = grid.times[i];
      const double v = std::exp(p2 * t1 + p1 * (t2 - t1)) - std::exp(p1 * (t1 + t2));
      c(i, j) = v;
      c(j, i) = v;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("covariance eigendecomposition failed");
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  Eigen::VectorXd lambda = es.eigenvalues();
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    if (lambda[k] < -1e-10 * scale) {
      throw std::runtime_error(
          "covariance matrix is not positive semidefinite: eigenvalue " +
          std::to_string(lambda[k]) + " with largest " + std::to_string(scale));
    }
    lambda[k] = lambda[k] > 0.0 ? std::sqrt(lambda[k]) : 0.0;
  }
  const Eigen::MatrixXd f = es.eigenvectors() * lambda.asDiagonal();
  cov_.assign(c.data(), c.data() + dim_ * dim_);
  factor_.resize(dim_ * dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      factor_[i * dim_ + j] = f(static_cast<Eigen::Index>(i),
                                static_cast<Eigen::Index>(j));
}

std::vector<double> CltGaussianSampler::sample(RngStream& gen) const {
  std::vector<double> z(dim_), out(dim_, 0.0);
  for (auto& v : z) v = gen.gaussian();
  for (std::size_t i = 0; i < dim_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) acc += factor_[i * dim_ + j] * z[j];
    out[i] = acc;
  }
  return out;
}

std::vector<double> sample_clt_gaussian(const LevyModel& model,
                                        const GridSpec& grid, RngStream& gen) {
  return CltGaussianSampler(model, grid).sample(gen);
}

std::vector<double> sample_poisson_points(RngStream& gen, double tau,
                                          double alpha, std::int64_t atom_cap) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  if (!(alpha > 0.0) || !(alpha < 2.0))
    throw std::invalid_argument("alpha must lie in (0,2)");
  std::vector<double> points;
  const double gamma_cut = std::pow(tau, -alpha);  // U > tau iff Gamma < tau^-alpha
  double gamma = 0.0;
  for (;;) {
    gamma += gen.exponential();
    if (gamma >= gamma_cut) break;
    if (static_cast<std::int64_t>(points.size()) >= atom_cap)
      throw std::invalid_argument(
          "Poisson series atom cap exceeded (expected count tau^-alpha = " +
          std::to_string(gamma_cut) + "); increase tau or the cap");
    points.push_back(std::pow(gamma, -1.0 / alpha));
  }
  return points;
}

double residual_bound(const LevyModel& model, double alpha, double tau,
                      const GridSpec& grid) {
  if (!(alpha > 0.0) || !(alpha < 2.0))
    throw std::invalid_argument("alpha must lie in (0,2)");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  const double drift = psi(model, alpha) / alpha;
  double max_factor = 0.0;
  if (alpha < 1.0) {
    // mean of the discarded mass (Campbell): int_0^tau u alpha u^{-alpha-1} du
    const double p1 = psi(model, 1.0);
    for (double t : grid.times)
      max_factor = std::max(max_factor, std::exp((p1 - drift) * t));
    return alpha * std::pow(tau, 1.0 - alpha) / (1.0 - alpha) * max_factor;
  }
  // standard deviation of the centered discarded mass
  const double p2 = psi(model, 2.0);
  for (double t : grid.times)
    max_factor = std::max(max_factor, std::exp((p2 / 2.0 - drift) * t));
  return std::sqrt(alpha * std::pow(tau, 2.0 - alpha) / (2.0 - alpha)) * max_factor;
}

double tau_for_tolerance(const LevyModel& model, double alpha, double eps,
                         const GridSpec& grid) {
  if (!(eps > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  double lo_log = std::log(1e-300), hi_log = std::log(1e6);
  if (residual_bound(model, alpha, std::exp(lo_log), grid) > eps)
    throw std::invalid_argument("tolerance unreachable by truncation alone");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo_log + hi_log);
    if (residual_bound(model, alpha, std::exp(mid), grid) <= eps)
      lo_log = mid;
    else
      hi_log = mid;
  }
  return std::exp(lo_log);
}

StableSeriesSample sample_stable_series(const LevyModel& model, double alpha,
                                        const GridSpec& grid,
                                        const PoissonSeriesConfig& cfg,
                                        std::uint64_t seed,
                                        std::uint64_t run_id) {
  if (grid.times.front() < 0.0)
    throw std::invalid_argument(
        "the stable series is implemented on the nonnegative half-line only; "
        "two-sided grids are not supported");
  const double tau = cfg.by_tau
                         ? cfg.tau
                         : tau_for_tolerance(model, alpha, cfg.tolerance, grid);
  if (std::pow(tau, -alpha) > static_cast<double>(cfg.atom_cap))
    throw std::invalid_argument(
        "expected atom count tau^-alpha exceeds the atom cap; increase tau");

  RngStream arrivals(seed, run_id, ~0ULL);
  const std::vector<double> atoms =
      sample_poisson_points(arrivals, tau, alpha, cfg.atom_cap);

  const double drift = psi(model, alpha) / alpha;
  const std::size_t d = grid.times.size();
  const bool grid_is_origin_only = d == 1 && grid.times[0] == 0.0;
  std::vector<CompensatedSum> acc(d);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (grid_is_origin_only) {
      acc[0].add(atoms[i]);  // the path factor at t = 0 is exactly 1
      continue;
    }
    RngStream path_stream(seed, run_id, static_cast<std::uint64_t>(i));
    const std::vector<double> xi = sample_path(model, grid.times, path_stream);
    for (std::size_t j = 0; j < d; ++j)
      acc[j].add(atoms[i] * std::exp(xi[j] - drift * grid.times[j]));
  }

  StableSeriesSample out;
  out.tau = tau;
  out.atom_count = static_cast<std::int64_t>(atoms.size());
  out.error_bound = residual_bound(model, alpha, tau, grid);
  out.path.resize(d);
  const double p1 = psi(model, 1.0);
  for (std::size_t j = 0; j < d; ++j) {
    double v = acc[j].value();
    if (alpha == 1.0) {
      v -= std::log(1.0 / tau);
    } else if (alpha > 1.0) {
      v -= alpha * std::pow(tau, 1.0 - alpha) / (alpha - 1.0) *
           std::exp((p1 - drift) * grid.times[j]);
    }
    out.path[j] = v;
  }
  return out;
}

}  // namespace levysum
