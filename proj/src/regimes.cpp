// Copyright 2026 the levysum authors
// SPDX-License-Identifier: Apache-2.0

#include "levysum/regimes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "levysum/parallel.hpp"
#include "levysum/stats.hpp"

namespace levysum {

namespace {
// Proportional rates within this relative window of a critical point are
// treated as sitting exactly on it.
constexpr double kLambdaMatchTol = 1e-12;
}  // namespace

GrowthRule GrowthRule::constant(double s) {
  GrowthRule r;
  r.kind = Kind::Constant;
  r.s = s;
  r.validate();
  return r;
}

GrowthRule GrowthRule::proportional(double lambda) {
  GrowthRule r;
  r.kind = Kind::Proportional;
  r.lambda = lambda;
  r.validate();
  return r;
}

GrowthRule GrowthRule::critical(double theta, double s) {
  GrowthRule r;
  r.kind = Kind::Critical;
  r.theta = theta;
  r.critical_s = s;
  r.validate();
  return r;
}

GrowthRule GrowthRule::explicit_table(
    std::vector<std::pair<std::int64_t, double>> t) {
  GrowthRule r;
  r.kind = Kind::Table;
  r.table = std::move(t);
  r.validate();
  return r;
}

void GrowthRule::validate() const {
  switch (kind) {
    case Kind::Constant:
      if (!(s >= 0.0)) throw std::invalid_argument("constant rule requires s >= 0");
      break;
    case Kind::Proportional:
      if (!(lambda > 0.0))
        throw std::invalid_argument("proportional rule requires lambda > 0");
      break;
    case Kind::Critical:
      if (!(critical_s > 0.0) || !std::isfinite(theta))
        throw std::invalid_argument("critical rule requires s > 0 and finite theta");
      break;
    case Kind::Table: {
      if (table.empty()) throw std::invalid_argument("growth table is empty");
      std::int64_t prev = 0;
      for (const auto& [n, sn] : table) {
        if (n <= prev)
          throw std::invalid_argument("growth table N must be strictly increasing");
        if (!(sn >= 0.0))
          throw std::invalid_argument("growth table requires s_N >= 0");
        prev = n;
      }
      break;
    }
  }
}

const char* RegimeClass::name() const {
  switch (kind) {
    case Kind::Zero: return "zero";
    case Kind::Slow: return "slow";
    case Kind::Critical: return "critical";
    case Kind::Fast: return "fast";
  }
  return "?";
}

std::int64_t critical_rule_N(const LevyModel& model, double theta, double s) {
  const RateProfile profile(model);
  const double l2 = critical_points(profile).lambda2;
  const double log_n = l2 * s + 2.0 * theta * std::sqrt(psi2(model, 2.0) * s);
  const double n = std::exp(log_n);
  if (!(n >= 0.5))
    throw std::domain_error("critical rule yields N < 1 at s = " + std::to_string(s));
  if (n > 9.1e18)
    throw std::domain_error("critical rule yields N beyond 64-bit range");
  return static_cast<std::int64_t>(std::llround(n));
}

double growth_scale(const GrowthRule& rule, std::int64_t N) {
  rule.validate();
  if (N < 1) throw std::invalid_argument("ensemble size N must be >= 1");
  switch (rule.kind) {
    case GrowthRule::Kind::Constant:
      return rule.s;
    case GrowthRule::Kind::Proportional:
      return std::log(static_cast<double>(N)) / rule.lambda;
    case GrowthRule::Kind::Critical:
      return rule.critical_s;
    case GrowthRule::Kind::Table:
      for (const auto& [n, sn] : rule.table)
        if (n == N) return sn;
      throw std::invalid_argument("N = " + std::to_string(N) +
                                  " not present in the growth table");
  }
  return 0.0;
}

namespace {

RegimeClass classify_by_lambda(const RateProfile& profile, double lambda) {
  const double l2 = critical_points(profile).lambda2;
  RegimeClass rc;
  if (std::abs(lambda - l2) <= kLambdaMatchTol * (1.0 + std::abs(l2))) {
    rc.kind = RegimeClass::Kind::Critical;
    rc.theta = 0.0;
    return rc;
  }
  if (lambda > l2) {
    rc.kind = RegimeClass::Kind::Slow;
    return rc;
  }
  rc.kind = RegimeClass::Kind::Fast;
  rc.lambda = lambda;
  rc.alpha = solve_alpha(profile, lambda);
  return rc;
}

}  // namespace

RegimeClass classify(const LevyModel& model, const GrowthRule& rule) {
  model.validate();
  rule.validate();
  const RateProfile profile(model);
  RegimeClass rc;
  switch (rule.kind) {
    case GrowthRule::Kind::Constant:
      rc.kind = RegimeClass::Kind::Zero;
      break;
    case GrowthRule::Kind::Proportional:
      rc = classify_by_lambda(profile, rule.lambda);
      break;
    case GrowthRule::Kind::Critical:
      rc.kind = RegimeClass::Kind::Critical;
      rc.theta = rule.theta;
      break;
    case GrowthRule::Kind::Table: {
      const std::size_t tail = std::min<std::size_t>(5, rule.table.size());
      const std::size_t first = rule.table.size() - tail;
      bool tail_constant = true;
      for (std::size_t i = first; i < rule.table.size(); ++i)
        tail_constant = tail_constant &&
                        rule.table[i].second == rule.table.back().second;
      if (tail_constant) {
        rc.kind = RegimeClass::Kind::Zero;  // bounded s_N: central limit case
        break;
      }
      double lo = 0.0, hi = 0.0;
      for (std::size_t i = first; i < rule.table.size(); ++i) {
        const auto& [n, sn] = rule.table[i];
        if (!(sn > 0.0))
          throw std::domain_error(
              "growth table has no stable limit of log N / s_N over its tail");
        const double ratio = std::log(static_cast<double>(n)) / sn;
        if (i == first) lo = hi = ratio;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
      if (hi - lo > 1e-3 * (1.0 + std::abs(hi)))
        throw std::domain_error(
            "growth table has no stable limit of log N / s_N over its tail");
      rc = classify_by_lambda(profile, 0.5 * (lo + hi));
      break;
    }
  }
  rc.lattice_warning = model.lattice() && rc.kind == RegimeClass::Kind::Fast;
  return rc;
}

Moments moments_exact(const LevyModel& model, std::int64_t N, double s, double t) {
  if (!(s + t >= 0.0))
    throw std::domain_error("moments need s + t >= 0; the process starts at time 0");
  if (N < 1) throw std::invalid_argument("ensemble size N must be >= 1");
  const double x = s + t;
  const double n = static_cast<double>(N);
  Moments m;
  m.mean = n * std::exp(psi(model, 1.0) * x);
  m.variance = n * (std::exp(psi(model, 2.0) * x) - std::exp(2.0 * psi(model, 1.0) * x));
  if (m.variance < 0.0) m.variance = 0.0;  // roundoff at x == 0
  return m;
}

double log_scaling_B(const LevyModel& model, double alpha, std::int64_t N,
                     double s, double t) {
  if (!(alpha > 0.0) || !(alpha < 2.0))
    throw std::domain_error("scaling needs alpha in (0,2)");
  if (!(s > 0.0)) throw std::domain_error("scaling needs s > 0");
  const RateProfile profile(model);
  const double log_n = std::log(static_cast<double>(N));
  const double c =
      (log_n - std::log(alpha * std::sqrt(2.0 * M_PI * psi2(model, alpha) * s))) / s;
  double inv;
  try {
    inv = rate_inverse(profile, c);
  } catch (const std::domain_error&) {
    throw std::domain_error(
        "scaling undefined at N = " + std::to_string(N) +
        ": (log N - log(alpha sqrt(2 pi psi''(alpha) s)))/s = " + std::to_string(c) +
        " is outside [0, sup I); increase N");
  }
  return psi(model, alpha) / alpha * t + s * inv;
}

double scaling_B(const LevyModel& model, double alpha, std::int64_t N, double s,
                 double t) {
  return std::exp(log_scaling_B(model, alpha, N, s, t));
}

TruncatedMoment truncated_exp_moment(const LevyModel& model, double kappa,
                                     double x, double b, TruncMethod method,
                                     std::int64_t replicates, std::uint64_t seed,
                                     int threads) {
  if (!(kappa >= 0.0)) throw std::domain_error("truncated moment needs kappa >= 0");
  if (!(x > 0.0)) throw std::domain_error("truncated moment needs x > 0");
  TruncatedMoment out;
  const double scale = psi(model, kappa) * x;
  if (method == TruncMethod::ClosedForm) {
    if (model.kind != LevyModel::Kind::BrownianMotion)
      throw std::invalid_argument(
          "closed-form truncated moment is only available for Brownian models");
    const double r = (b - psi1(model, kappa) * x) / std::sqrt(psi2(model, kappa) * x);
    out.normalized = normal_cdf(r);
    out.stderr_normalized = 0.0;
  } else {
    if (replicates < 1) throw std::invalid_argument("tilted MC needs replicates >= 1");
    const LevyModel tilted = tilt(model, kappa);
    // Fixed-size chunks with per-chunk substreams; the fold over chunk counts
    // is exact integer arithmetic, so any worker count gives the same result.
    constexpr std::int64_t kChunk = 1 << 16;
    const std::int64_t chunks = (replicates + kChunk - 1) / kChunk;
    std::vector<std::int64_t> hits(chunks, 0);
    parallel_for(chunks, threads, [&](std::int64_t c) {
      const std::int64_t begin = c * kChunk;
      const std::int64_t end = std::min(replicates, begin + kChunk);
      std::int64_t h = 0;
      for (std::int64_t i_rep = begin; i_rep < end; ++i_rep) {
        RngStream stream(seed, 0x7472756E63ULL, static_cast<std::uint64_t>(i_rep));
        if (sample_increment(tilted, x, stream) <= b) ++h;
      }
      hits[c] = h;
    });
    std::int64_t total = 0;
    for (std::int64_t h : hits) total += h;
    const double p = static_cast<double>(total) / static_cast<double>(replicates);
    out.normalized = p;
    out.stderr_normalized =
        std::sqrt(p * (1.0 - p) / static_cast<double>(replicates));
  }
  out.log_value = scale + std::log(out.normalized);
  out.value = out.normalized * std::exp(scale);
  return out;
}

double centering_A(const LevyModel& model, const RegimeClass& regime,
                   std::int64_t N, double s, double t, std::uint64_t seed,
                   int threads) {
  if (regime.kind != RegimeClass::Kind::Fast)
    throw std::domain_error("centering A_N is defined for the fast regime only");
  const RateProfile profile(model);
  const auto [l1, l2] = critical_points(profile);
  const double lambda = regime.lambda;
  const double alpha = regime.alpha;
  const double n = static_cast<double>(N);

  if (lambda < l1 * (1.0 - kLambdaMatchTol)) return 0.0;

  if (std::abs(lambda - l1) <= kLambdaMatchTol * (1.0 + l1)) {
    const double b0 = log_scaling_B(model, alpha, N, s, 0.0);
    const TruncMethod method = model.kind == LevyModel::Kind::BrownianMotion
                                   ? TruncMethod::ClosedForm
                                   : TruncMethod::TiltedMC;
    const TruncatedMoment tm =
        truncated_exp_moment(model, 1.0, s, b0, method, 1000000, seed, threads);
    const double l_t = t < 0.0 ? (psi1(model, 0.0) - psi1(model, 1.0)) * t : 0.0;
    return std::exp(psi(model, 1.0) * t) * n * tm.value +
           l_t * scaling_B(model, alpha, N, s, t);
  }

  // lambda in (lambda1, lambda2): plain mean centering.
  return std::exp(psi(model, 1.0) * t) * moments_exact(model, N, s, 0.0).mean;
}

}  // namespace levysum
