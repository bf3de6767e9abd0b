// Copyright 2026 the levysum authors
// SPDX-License-Identifier: Apache-2.0
//
// Statistical primitives: normal distribution helpers that stay accurate far
// into the tails, the Kolmogorov-Smirnov goodness-of-fit test, the Hill tail
// index estimator, and compensated summation.

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace levysum {

// Neumaier variant of Kahan summation. Used wherever a centered signal must
// survive cancellation against a dominant mean.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  void merge(const CompensatedSum& other) {
    add(other.sum);
    add(other.comp);
  }
  double value() const { return sum + comp; }
};

double normal_cdf(double x);
double normal_sf(double x);  // 1 - Phi(x)
// log of the survival function, finite even where normal_sf underflows.
double log_normal_sf(double x);

// Asymptotic Kolmogorov distribution Q(x) = 2 sum_{k>=1} (-1)^{k-1}
// exp(-2 k^2 x^2); p-values use the Stephens small-sample correction
// (sqrt(n) + 0.12 + 0.11/sqrt(n)) D.
double kolmogorov_sf(double x);
double ks_p_value(double d, std::size_t n);
// Critical statistic: the d with ks_p_value(d, n) == alpha.
double ks_critical_value(std::size_t n, double alpha);

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
  std::size_t n = 0;
};

// One-sample two-sided KS test of `sample` against a continuous cdf.
// Requires n >= 8 and finite entries.
KsResult ks_test(std::span<const double> sample,
                 const std::function<double(double)>& cdf);

// Hill estimator from the k upper order statistics of a positive sample:
// alpha_hat = k / sum_{i<=k} log(X_(i) / X_(k+1)).
double hill_estimator(std::span<const double> sample, int k);
// Default order count: ceil(sqrt(n)) capped at n/10.
int hill_default_k(std::size_t n);

double mean(std::span<const double> xs);
double variance(std::span<const double> xs);  // n-1 denominator
double covariance(std::span<const double> xs, std::span<const double> ys);
double correlation(std::span<const double> xs, std::span<const double> ys);

}  // namespace levysum
