// Copyright 2026 the levysum authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <vector>

#include "levysum/rng.hpp"
#include "levysum/stats.hpp"

using namespace levysum;

TEST_CASE("streams are deterministic and address-separated") {
  RngStream a(42, 1, 2), b(42, 1, 2), c(42, 1, 3);
  for (int i = 0; i < 64; ++i) CHECK(a.next_u64() == b.next_u64());
  bool any_diff = false;
  RngStream a2(42, 1, 2);
  for (int i = 0; i < 64; ++i) any_diff |= a2.next_u64() != c.next_u64();
  CHECK(any_diff);
}

TEST_CASE("uniform stays inside the open unit interval") {
  RngStream g(7, 0, 0);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 200000; ++i) {
    const double u = g.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo > 0.0);
  CHECK(hi < 1.0);
  CHECK(lo < 1e-4);
  CHECK(hi > 1.0 - 1e-4);
}

TEST_CASE("gaussian moments") {
  RngStream g(11, 0, 0);
  const int n = 1000000;
  CompensatedSum s1, s2, s4;
  for (int i = 0; i < n; ++i) {
    const double x = g.gaussian();
    s1.add(x);
    s2.add(x * x);
    s4.add(x * x * x * x);
  }
  CHECK(s1.value() / n == doctest::Approx(0.0).epsilon(0.005).scale(1.0));
  CHECK(s2.value() / n == doctest::Approx(1.0).epsilon(0.006));
  CHECK(s4.value() / n == doctest::Approx(3.0).epsilon(0.03));
}

TEST_CASE("poisson sampler matches mean and variance in both regimes") {
  for (double mean_target : {0.3, 3.0, 50.0, 400.0}) {
    RngStream g(13, 99, static_cast<std::uint64_t>(mean_target * 1000));
    const int n = 200000;
    CompensatedSum s1, s2;
    for (int i = 0; i < n; ++i) {
      const double x = static_cast<double>(g.poisson(mean_target));
      s1.add(x);
      s2.add(x * x);
    }
    const double m = s1.value() / n;
    const double v = s2.value() / n - m * m;
    const double se_mean = std::sqrt(mean_target / n);
    CHECK(std::abs(m - mean_target) < 5.0 * se_mean);
    CHECK(v == doctest::Approx(mean_target).epsilon(0.05));
  }
  RngStream g(1, 0, 0);
  CHECK(g.poisson(0.0) == 0);
}

TEST_CASE("exponential has unit mean") {
  RngStream g(17, 0, 0);
  const int n = 500000;
  CompensatedSum s;
  for (int i = 0; i < n; ++i) s.add(g.exponential());
  CHECK(s.value() / n == doctest::Approx(1.0).epsilon(0.01));
}
