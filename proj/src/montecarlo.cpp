// Copyright 2026 the levysum authors
// SPDX-License-Identifier: Apache-2.0

#include "levysum/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "levysum/parallel.hpp"
#include "levysum/stats.hpp"

namespace levysum {

namespace {
constexpr std::int64_t kChunk = 8192;  // fixed summation batch inside a replicate
}

const char* normalization_name(NormalizationMode mode) {
  switch (mode) {
    case NormalizationMode::GaussianSqrtN: return "gaussian-sqrt-n";
    case NormalizationMode::GaussianMeanVar: return "gaussian-mean-var";
    case NormalizationMode::StableCentered: return "stable-centered";
  }
  return "?";
}

NormalizationPlan build_normalization(const LevyModel& model,
                                      const RegimeClass& regime, std::int64_t N,
                                      double s, const std::vector<double>& grid,
                                      std::uint64_t seed, int threads) {
  NormalizationPlan plan;
  const std::size_t d = grid.size();
  plan.center.resize(d);
  plan.scale.resize(d);
  const double n = static_cast<double>(N);
  switch (regime.kind) {
    case RegimeClass::Kind::Zero: {
      plan.mode = NormalizationMode::GaussianSqrtN;
      for (std::size_t j = 0; j < d; ++j) {
        plan.center[j] = moments_exact(model, N, s, grid[j]).mean;
        plan.scale[j] = std::sqrt(n);
      }
      break;
    }
    case RegimeClass::Kind::Slow:
    case RegimeClass::Kind::Critical: {
      plan.mode = NormalizationMode::GaussianMeanVar;
      for (std::size_t j = 0; j < d; ++j) {
        const Moments m = moments_exact(model, N, s, grid[j]);
        if (!(m.variance > 0.0))
          throw std::domain_error("variance normalization needs s + t > 0");
        plan.center[j] = m.mean;
        plan.scale[j] = std::sqrt(m.variance);
      }
      break;
    }
    case RegimeClass::Kind::Fast: {
      plan.mode = NormalizationMode::StableCentered;
      plan.log_scale.resize(d);
      plan.summand_center.resize(d);
      for (std::size_t j = 0; j < d; ++j) {
        plan.log_scale[j] = log_scaling_B(model, regime.alpha, N, s, grid[j]);
        plan.scale[j] = std::exp(plan.log_scale[j]);
        plan.center[j] = centering_A(model, regime, N, s, grid[j], seed, threads);
        plan.summand_center[j] = plan.center[j] / (n * plan.scale[j]);
      }
      break;
    }
  }
  for (std::size_t j = 0; j < d; ++j)
    if (!(plan.scale[j] > 0.0) || !std::isfinite(plan.scale[j]))
      throw std::domain_error("normalization scale must be positive and finite");
  return plan;
}

std::vector<double> EnsembleSummary::column(std::size_t j) const {
  std::vector<double> out(static_cast<std::size_t>(replicates));
  for (std::int64_t r = 0; r < replicates; ++r)
    out[static_cast<std::size_t>(r)] = normalized_at(r, j);
  return out;
}

namespace {

struct ResolvedSpec {
  std::int64_t N = 0;
  double s = 0.0;
  RegimeClass regime;
};

ResolvedSpec resolve(const EnsembleSpec& spec) {
  spec.model.validate();
  spec.rule.validate();
  ResolvedSpec r;
  if (spec.rule.kind == GrowthRule::Kind::Critical) {
    r.N = critical_rule_N(spec.model, spec.rule.theta, spec.rule.critical_s);
    if (spec.N != 0 && spec.N != r.N)
      throw std::invalid_argument(
          "explicit N disagrees with the critical growth rule (expected " +
          std::to_string(r.N) + ")");
  } else {
    if (spec.N < 1)
      throw std::invalid_argument("ensemble size N must be >= 1");
    r.N = spec.N;
  }
  r.s = growth_scale(spec.rule, r.N);
  r.regime = classify(spec.model, spec.rule);
  if (spec.regime_override) {
    r.regime.kind = *spec.regime_override;
    if (r.regime.kind == RegimeClass::Kind::Fast &&
        r.regime.alpha == 0.0)
      throw std::invalid_argument(
          "fast-regime override requires a rule that determines lambda");
    r.regime.lattice_warning =
        spec.model.lattice() && r.regime.kind == RegimeClass::Kind::Fast;
  }

  if (spec.replicates < 1)
    throw std::invalid_argument("replicates must be >= 1");
  if (spec.grid.empty()) throw std::invalid_argument("ensemble grid is empty");
  for (std::size_t j = 0; j < spec.grid.size(); ++j) {
    if (j > 0 && !(spec.grid[j] > spec.grid[j - 1]))
      throw std::invalid_argument("ensemble grid must be strictly increasing");
    if (!(r.s + spec.grid[j] >= 0.0))
      throw std::domain_error("ensemble grid requires s_N + t >= 0");
  }
  const double work = static_cast<double>(r.N) *
                      static_cast<double>(spec.replicates) *
                      static_cast<double>(spec.grid.size());
  if (work > static_cast<double>(spec.budget))
    throw BudgetError("sample budget exceeded: N*R*|grid| = " +
                      std::to_string(work) + " > " + std::to_string(spec.budget));
  return r;
}

}  // namespace

EnsembleSummary simulate_ensemble(const EnsembleSpec& spec) {
  const ResolvedSpec rs = resolve(spec);
  const std::size_t d = spec.grid.size();

  // Absolute observation times and the index of offset t = 0, if present.
  std::vector<double> times(d);
  std::ptrdiff_t origin = -1;
  for (std::size_t j = 0; j < d; ++j) {
    times[j] = rs.s + spec.grid[j];
    if (spec.grid[j] == 0.0) origin = static_cast<std::ptrdiff_t>(j);
  }
  if (spec.top_k > 0 && origin < 0)
    throw std::invalid_argument(
        "top-k order statistics are taken at t = 0; include 0 in the grid");

  EnsembleSummary out;
  out.regime = rs.regime;
  out.N = rs.N;
  out.replicates = spec.replicates;
  out.s = rs.s;
  out.grid = spec.grid;
  out.lattice_warning = rs.regime.lattice_warning;
  out.plan = build_normalization(spec.model, rs.regime, rs.N, rs.s, spec.grid,
                                 spec.seed, spec.threads);
  out.mode = out.plan.mode;
  out.normalized.resize(static_cast<std::size_t>(spec.replicates) * d);
  out.raw.resize(static_cast<std::size_t>(spec.replicates) * d);
  if (spec.top_k > 0) out.top.resize(static_cast<std::size_t>(spec.replicates));

  const bool fast = out.mode == NormalizationMode::StableCentered;
  const NormalizationPlan& plan = out.plan;
  const double n = static_cast<double>(rs.N);

  // Per-summand centering applied inside the loop, so the accumulator holds
  // the fluctuation signal instead of the dominant mean.
  std::vector<double> summand_center(d);
  for (std::size_t j = 0; j < d; ++j)
    summand_center[j] =
        fast ? plan.summand_center[j] : std::exp(psi(spec.model, 1.0) * times[j]);

  const LevyModel model = spec.model;
  const std::uint64_t seed = spec.seed;
  const std::int64_t N = rs.N;
  const int k = spec.top_k;

  parallel_for(spec.replicates, spec.threads, [&](std::int64_t rep) {
    std::vector<CompensatedSum> total(d);
    std::vector<CompensatedSum> chunk(d);
    // Bounded min-heap of the k largest scaled summands at t = 0.
    std::vector<double> heap;
    heap.reserve(static_cast<std::size_t>(std::max(k, 0)));

    std::vector<double> xi(d);
    for (std::int64_t base = 0; base < N; base += kChunk) {
      const std::int64_t stop = std::min(N, base + kChunk);
      for (std::size_t j = 0; j < d; ++j) chunk[j] = CompensatedSum{};
      for (std::int64_t i = base; i < stop; ++i) {
        RngStream stream(seed, static_cast<std::uint64_t>(rep),
                         static_cast<std::uint64_t>(i));
        double x = 0.0, prev = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
          x += sample_increment(model, times[j] - prev, stream);
          prev = times[j];
          xi[j] = x;
        }
        for (std::size_t j = 0; j < d; ++j) {
          const double w =
              fast ? std::exp(xi[j] - plan.log_scale[j]) : std::exp(xi[j]);
          chunk[j].add(w - summand_center[j]);
        }
        if (k > 0) {
          const std::size_t jo = static_cast<std::size_t>(origin);
          const double w0 = fast ? std::exp(xi[jo] - plan.log_scale[jo])
                                 : std::exp(xi[jo]) / plan.scale[jo];
          if (static_cast<int>(heap.size()) < k) {
            heap.push_back(w0);
            std::push_heap(heap.begin(), heap.end(), std::greater<>{});
          } else if (w0 > heap.front()) {
            std::pop_heap(heap.begin(), heap.end(), std::greater<>{});
            heap.back() = w0;
            std::push_heap(heap.begin(), heap.end(), std::greater<>{});
          }
        }
      }
      for (std::size_t j = 0; j < d; ++j) total[j].merge(chunk[j]);
    }

    for (std::size_t j = 0; j < d; ++j) {
      const double centered = total[j].value();
      const std::size_t slot = static_cast<std::size_t>(rep) * d + j;
      if (fast) {
        // centered = sum_i W_i(t) - A_N(t)/B_N(t) already in scale units
        out.normalized[slot] = centered;
        out.raw[slot] =
            (centered + n * summand_center[j]) * std::exp(plan.log_scale[j]);
      } else {
        const double z = centered + n * summand_center[j];
        out.normalized[slot] = (z - plan.center[j]) / plan.scale[j];
        out.raw[slot] = z;
      }
    }
    if (k > 0) {
      std::sort(heap.begin(), heap.end(), std::greater<>{});
      out.top[static_cast<std::size_t>(rep)] = heap;
    }
  });

  return out;
}

std::vector<std::vector<double>> top_order_statistics(const EnsembleSpec& spec) {
  if (spec.top_k < 0) throw std::invalid_argument("top_k must be >= 0");
  if (spec.top_k == 0) return {};
  EnsembleSpec s = spec;
  const EnsembleSummary summary = simulate_ensemble(s);
  if (summary.mode != NormalizationMode::StableCentered)
    throw std::domain_error(
        "top order statistics require the fast regime (b_N(0) defined)");
  return summary.top;
}

PathDecomposition decompose_path(const LevyModel& model, double alpha, double s,
                                 const std::vector<double>& grid,
                                 RngStream& gen) {
  if (!(alpha > 0.0) || !(alpha < 2.0))
    throw std::domain_error("decomposition needs alpha in (0,2)");
  PathDecomposition out;
  out.w0 = std::exp(sample_increment(model, s, gen));
  const double drift = psi(model, alpha) / alpha;
  out.eta.resize(grid.size());
  double x = 0.0, prev = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (!(grid[j] >= prev) || (j == 0 && !(grid[j] >= 0.0)))
      throw std::invalid_argument("decomposition grid must be nondecreasing, >= 0");
    x += sample_increment(model, grid[j] - prev, gen);
    prev = grid[j];
    out.eta[j] = x - drift * grid[j];
  }
  return out;
}

}  // namespace levysum
