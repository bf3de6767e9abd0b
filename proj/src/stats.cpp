// Copyright 2026 the levysum authors
// SPDX-License-Identifier: Apache-2.0

#include "levysum/stats.hpp"

#include <algorithm>
#include <stdexcept>

namespace levysum {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kLogSqrt2Pi = 0.9189385332046727;
}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_sf(double x) { return 0.5 * std::erfc(x / kSqrt2); }

double log_normal_sf(double x) {
  if (x < 25.0) {
    const double s = normal_sf(x);
    if (s > 0.0) return std::log(s);
  }
  // Mills-ratio asymptotic expansion; relative error < 1e-12 beyond x = 25.
  const double x2 = x * x;
  const double series = -1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2) +
                        105.0 / (x2 * x2 * x2 * x2);
  return -0.5 * x2 - std::log(x) - kLogSqrt2Pi + std::log1p(series);
}

double kolmogorov_sf(double x) {
  if (x <= 0.0) return 1.0;
  if (x >= 8.0) return 0.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_p_value(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  return kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d);
}

double ks_critical_value(std::size_t n, double alpha) {
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (ks_p_value(mid, n) > alpha)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

KsResult ks_test(std::span<const double> sample,
                 const std::function<double(double)>& cdf) {
  if (sample.size() < 8)
    throw std::invalid_argument("ks_test requires at least 8 observations");
  std::vector<double> sorted(sample.begin(), sample.end());
  for (double v : sorted)
    if (!std::isfinite(v))
      throw std::invalid_argument("ks_test sample contains non-finite values");
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double lower = f - static_cast<double>(i) / n;
    const double upper = static_cast<double>(i + 1) / n - f;
    d = std::max({d, lower, upper});
  }
  return {d, ks_p_value(d, sorted.size()), sorted.size()};
}

double hill_estimator(std::span<const double> sample, int k) {
  if (k < 1 || static_cast<std::size_t>(k) >= sample.size())
    throw std::invalid_argument("hill_estimator requires 1 <= k < n");
  std::vector<double> top(sample.begin(), sample.end());
  std::nth_element(top.begin(), top.begin() + k, top.end(),
                   std::greater<double>());
  const double pivot = top[k];  // X_(k+1)
  if (!(pivot > 0.0))
    throw std::domain_error("hill_estimator requires a positive sample");
  double acc = 0.0;
  for (int i = 0; i < k; ++i) acc += std::log(top[i] / pivot);
  if (!(acc > 0.0))
    throw std::domain_error("hill_estimator: degenerate ties in the tail");
  return static_cast<double>(k) / acc;
}

int hill_default_k(std::size_t n) {
  const int root = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  return std::max(1, std::min<int>(root, static_cast<int>(n / 10)));
}

double mean(std::span<const double> xs) {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value() / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
  const double m = mean(xs);
  CompensatedSum s;
  for (double x : xs) s.add((x - m) * (x - m));
  return s.value() / static_cast<double>(xs.size() - 1);
}

double covariance(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size())
    throw std::invalid_argument("covariance requires equal-length samples");
  const double mx = mean(xs), my = mean(ys);
  CompensatedSum s;
  for (std::size_t i = 0; i < xs.size(); ++i) s.add((xs[i] - mx) * (ys[i] - my));
  return s.value() / static_cast<double>(xs.size() - 1);
}

double correlation(std::span<const double> xs, std::span<const double> ys) {
  return covariance(xs, ys) / std::sqrt(variance(xs) * variance(ys));
}

}  // namespace levysum
