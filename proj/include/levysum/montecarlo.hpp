// Copyright 2026 the levysum authors
// SPDX-License-Identifier: Apache-2.0
//
// High-throughput ensemble simulation of Z_N(t) = sum_i e^{xi_i(s_N + t)}
// with regime-appropriate normalization and top-k order statistics. Results
// depend only on (spec, seed): every path draws from its own substream
// derived from (seed, replicate, path), chunk sums use compensated
// summation in a fixed order, and replicates are folded by index.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "levysum/regimes.hpp"

namespace levysum {

inline constexpr std::int64_t kDefaultBudget = 1000000000;

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EnsembleSpec {
  LevyModel model;
  GrowthRule rule;
  std::int64_t N = 0;  // derived from the rule for the critical rule if 0
  std::int64_t replicates = 1;
  std::vector<double> grid{0.0};  // offsets t; s_N + t >= 0 enforced
  std::uint64_t seed = 0;
  int top_k = 0;  // top order statistics of the scaled summands at t = 0
  std::optional<RegimeClass::Kind> regime_override;
  int threads = 0;  // 0 = hardware concurrency; never affects results
  std::int64_t budget = kDefaultBudget;  // cap on N * replicates * |grid|
};

enum class NormalizationMode { GaussianSqrtN, GaussianMeanVar, StableCentered };

const char* normalization_name(NormalizationMode mode);

// Per-grid-point centering and scaling for a classified regime.
struct NormalizationPlan {
  NormalizationMode mode = NormalizationMode::GaussianMeanVar;
  std::vector<double> center;  // A_N(t) or E Z_N(t)
  std::vector<double> scale;   // B_N(t), sqrt(Var Z_N(t)), or sqrt(N)
  // Fast regime only: b_N(t) = log B_N(t) and the per-summand centering
  // A_N(t) / (N B_N(t)) used inside the streaming loop.
  std::vector<double> log_scale;
  std::vector<double> summand_center;
};

NormalizationPlan build_normalization(const LevyModel& model,
                                      const RegimeClass& regime, std::int64_t N,
                                      double s, const std::vector<double>& grid,
                                      std::uint64_t seed, int threads);

struct EnsembleSummary {
  RegimeClass regime;
  NormalizationMode mode = NormalizationMode::GaussianMeanVar;
  std::int64_t N = 0;
  std::int64_t replicates = 0;
  double s = 0.0;
  std::vector<double> grid;
  NormalizationPlan plan;
  // Row-major [replicate][grid point].
  std::vector<double> normalized;
  std::vector<double> raw;
  // Per replicate, descending scaled summands W at t = 0 (top_k of them).
  std::vector<std::vector<double>> top;
  bool lattice_warning = false;

  double normalized_at(std::int64_t r, std::size_t j) const {
    return normalized[static_cast<std::size_t>(r) * grid.size() + j];
  }
  double raw_at(std::int64_t r, std::size_t j) const {
    return raw[static_cast<std::size_t>(r) * grid.size() + j];
  }
  // All replicate values at one grid point.
  std::vector<double> column(std::size_t j) const;
};

EnsembleSummary simulate_ensemble(const EnsembleSpec& spec);

// Per-replicate descending top-k of the scaled summands at t = 0; requires a
// fast-regime spec (so b_N(0) is defined) with 0 in the grid.
std::vector<std::vector<double>> top_order_statistics(const EnsembleSpec& spec);

struct PathDecomposition {
  double w0 = 0.0;             // e^{xi(s)}
  std::vector<double> eta;     // eta(t) = xi(s+t) - xi(s) - (psi(alpha)/alpha) t
};

// Splits one summand into its t=0 level and the level-independent relative
// path, so W(t) = W(0) e^{eta(t)} reconstructs the scaled summand.
PathDecomposition decompose_path(const LevyModel& model, double alpha, double s,
                                 const std::vector<double>& grid, RngStream& gen);

}  // namespace levysum
