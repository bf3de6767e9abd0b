// Copyright 2026 the levysum authors
// SPDX-License-Identifier: Apache-2.0

#include "levysum/levy_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace levysum {

LevyModel LevyModel::brownian(double mu, double sigma) {
  LevyModel m;
  m.kind = Kind::BrownianMotion;
  m.mu = mu;
  m.sigma = sigma;
  m.validate();
  return m;
}

LevyModel LevyModel::compound_poisson_gauss(double rate, double jump_mean,
                                            double jump_sd, double drift) {
  LevyModel m;
  m.kind = Kind::CompoundPoissonGauss;
  m.rate = rate;
  m.jump_mean = jump_mean;
  m.jump_sd = jump_sd;
  m.drift = drift;
  m.validate();
  return m;
}

void LevyModel::validate() const {
  if (kind == Kind::BrownianMotion) {
    if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(mu))
      throw std::invalid_argument("brownian model requires finite mu and sigma > 0");
  } else {
    if (!(rate > 0.0) || !std::isfinite(rate))
      throw std::invalid_argument("compound-poisson model requires rate > 0");
    if (!(jump_sd >= 0.0) || !std::isfinite(jump_sd) ||
        !std::isfinite(jump_mean) || !std::isfinite(drift))
      throw std::invalid_argument("compound-poisson model has non-finite parameters");
    if (jump_sd == 0.0 && jump_mean == 0.0)
      throw std::invalid_argument(
          "degenerate model: jumps of size zero make xi(1) a.s. constant");
  }
}

std::string LevyModel::describe() const {
  char buf[160];
  if (kind == Kind::BrownianMotion) {
    std::snprintf(buf, sizeof buf, "brownian(mu=%g, sigma=%g)", mu, sigma);
  } else {
    std::snprintf(buf, sizeof buf, "cpg(rate=%g, jump_mean=%g, jump_sd=%g, drift=%g)",
                  rate, jump_mean, jump_sd, drift);
  }
  return buf;
}

Cumulant eval_cumulant(const LevyModel& m, double u) {
  Cumulant c;
  if (m.kind == LevyModel::Kind::BrownianMotion) {
    const double s2 = m.sigma * m.sigma;
    c.psi = m.mu * u + 0.5 * s2 * u * u;
    c.dpsi = m.mu + s2 * u;
    c.ddpsi = s2;
  } else {
    // psi(u) = c u + rate (exp(m u + s^2 u^2 / 2) - 1)
    const double s2 = m.jump_sd * m.jump_sd;
    const double e = m.jump_mean * u + 0.5 * s2 * u * u;
    const double g = std::exp(e);
    const double gm = m.jump_mean + s2 * u;
    c.psi = m.drift * u + m.rate * std::expm1(e);
    c.dpsi = m.drift + m.rate * gm * g;
    c.ddpsi = m.rate * (s2 + gm * gm) * g;
  }
  return c;
}

double beta0(const LevyModel& m) { return eval_cumulant(m, 0.0).dpsi; }

double beta_inf(const LevyModel& m) {
  if (m.kind == LevyModel::Kind::BrownianMotion)
    return std::numeric_limits<double>::infinity();
  if (m.jump_sd > 0.0 || m.jump_mean > 0.0)
    return std::numeric_limits<double>::infinity();
  // Negative point jumps: psi'(u) = drift + rate*m*exp(m u) -> drift.
  return m.drift;
}

double sup_rate(const LevyModel& m) {
  if (std::isinf(beta_inf(m))) return std::numeric_limits<double>::infinity();
  // psi(u) = c u + rate (e^{mu} - 1) with m < 0:
  // u psi'(u) - psi(u) = rate (u m e^{mu} - e^{mu} + 1) -> rate.
  return m.rate;
}

LevyModel tilt(const LevyModel& m, double kappa) {
  m.validate();
  if (kappa == 0.0) return m;
  if (m.kind == LevyModel::Kind::BrownianMotion)
    return LevyModel::brownian(m.mu + m.sigma * m.sigma * kappa, m.sigma);
  const double s2 = m.jump_sd * m.jump_sd;
  return LevyModel::compound_poisson_gauss(
      m.rate * std::exp(m.jump_mean * kappa + 0.5 * s2 * kappa * kappa),
      m.jump_mean + s2 * kappa, m.jump_sd, m.drift);
}

double sample_increment(const LevyModel& m, double t, RngStream& gen) {
  if (!(t >= 0.0)) throw std::domain_error("increment length must be >= 0");
  if (t == 0.0) return 0.0;
  if (m.kind == LevyModel::Kind::BrownianMotion)
    return m.mu * t + m.sigma * std::sqrt(t) * gen.gaussian();
  const auto n = gen.poisson(m.rate * t);
  double x = m.drift * t + static_cast<double>(n) * m.jump_mean;
  if (m.jump_sd > 0.0 && n > 0)
    x += m.jump_sd * std::sqrt(static_cast<double>(n)) * gen.gaussian();
  return x;
}

std::vector<double> sample_path(const LevyModel& m, std::span<const double> grid,
                                RngStream& gen) {
  if (grid.empty()) return {};
  if (!(grid.front() >= 0.0))
    throw std::domain_error("path grid must start at a time >= 0");
  std::vector<double> out(grid.size());
  double prev_t = 0.0;
  double x = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (!(grid[j] >= prev_t))
      throw std::domain_error("path grid must be nondecreasing");
    x += sample_increment(m, grid[j] - prev_t, gen);
    prev_t = grid[j];
    out[j] = x;
  }
  return out;
}

}  // namespace levysum
