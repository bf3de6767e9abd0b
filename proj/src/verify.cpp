// Copyright 2026 the levysum authors
// SPDX-License-Identifier: Apache-2.0

#include "levysum/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "levysum/parallel.hpp"
#include "levysum/rate_function.hpp"

namespace levysum {

namespace {

double frechet_cdf(double u, double alpha) {
  return u > 0.0 ? std::exp(-std::pow(u, -alpha)) : 0.0;
}

// cdf of the one-sided stable(1/2) law with Laplace transform
// exp(-Gamma(1/2) sqrt(s)).
double stable_half_cdf(double x) {
  return x > 0.0 ? std::erfc(std::sqrt(M_PI / (4.0 * x))) : 0.0;
}

// log of the upper-truncated moment E[e^{kappa xi(x)} 1{xi(x) > b}] for a
// Brownian model.
double log_upper_trunc_brownian(const LevyModel& m, double kappa, double x,
                                double b) {
  const double r = (b - psi1(m, kappa) * x) / std::sqrt(psi2(m, kappa) * x);
  return psi(m, kappa) * x + log_normal_sf(r);
}

}  // namespace

CheckRow CheckRow::make(std::string name, double observed, double reference,
                        double tolerance, double se) {
  CheckRow row;
  row.name = std::move(name);
  row.observed = observed;
  row.reference = reference;
  row.tolerance = tolerance;
  row.stderr_value = se;
  row.pass = std::isfinite(observed) &&
             std::abs(observed - reference) <= tolerance;
  return row;
}

bool CheckReport::pass() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const CheckRow& r) { return r.pass; });
}

nlohmann::json CheckReport::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const CheckRow& r : rows) {
    nlohmann::json j{{"name", r.name},
                     {"observed", r.observed},
                     {"reference", r.reference},
                     {"tolerance", r.tolerance},
                     {"pass", r.pass}};
    if (std::isfinite(r.stderr_value)) j["stderr"] = r.stderr_value;
    rows_json.push_back(std::move(j));
  }
  return nlohmann::json{
      {"check", check}, {"params", params}, {"rows", rows_json}, {"pass", pass()}};
}

CheckReport verify_truncated_moments(
    const LevyModel& model, double kappa, int part,
    const std::vector<std::pair<double, double>>& schedule, const McOptions& opts,
    double final_tolerance) {
  if (part < 1 || part > 3)
    throw std::invalid_argument("truncated-moment part must be 1, 2 or 3");
  if (schedule.empty())
    throw std::invalid_argument("truncated-moment schedule is empty");
  const bool brownian = model.kind == LevyModel::Kind::BrownianMotion;
  const RateProfile profile(model);

  CheckReport report;
  report.check = "truncated-moment-part" + std::to_string(part);
  report.params = {{"model", model.describe()},
                   {"kappa", kappa},
                   {"part", part},
                   {"method", brownian ? "closed-form" : "tilted-mc"},
                   {"replicates", brownian ? 0 : opts.replicates},
                   {"seed", opts.seed}};

  const double dpk = psi1(model, kappa);
  for (std::size_t idx = 0; idx < schedule.size(); ++idx) {
    const auto [x, b] = schedule[idx];
    const bool last = idx + 1 == schedule.size();
    const double tol = last ? final_tolerance
                            : std::numeric_limits<double>::infinity();
    const std::string tag = "x=" + std::to_string(x);
    if (part == 1) {
      const double theta = (b - dpk * x) / std::sqrt(psi2(model, kappa) * x);
      if (std::abs(theta) > 20.0)
        throw std::invalid_argument(
            "part-1 schedule violates b = psi'(kappa) x + theta sqrt(psi''(kappa) x)");
      const TruncatedMoment tm = truncated_exp_moment(
          model, kappa, x, b,
          brownian ? TruncMethod::ClosedForm : TruncMethod::TiltedMC,
          opts.replicates, opts.seed, opts.threads);
      const double se = tm.stderr_normalized;
      report.rows.push_back(CheckRow::make("phi/" + tag, tm.normalized,
                                           normal_cdf(theta), tol, se));
      continue;
    }
    // Sharp tail forms: locate the saddle of b/x and require it on the
    // correct side of kappa.
    const double ratio_point = b / x;
    if (part == 2 && !(ratio_point > dpk))
      throw std::invalid_argument("part-2 schedule needs b/x > psi'(kappa)");
    if (part == 3 && !(ratio_point < dpk))
      throw std::invalid_argument("part-3 schedule needs b/x < psi'(kappa)");
    const RateValue rv = rate_eval(profile, ratio_point);
    const double a = rv.u;
    if (part == 2 && !(a > kappa))
      throw std::invalid_argument("part-2 schedule needs the saddle above kappa");
    if (part == 3 && !(a < kappa))
      throw std::invalid_argument("part-3 schedule needs the saddle below kappa");
    const double log_rhs =
        kappa * b - rv.value * x -
        std::log(std::abs(a - kappa) * std::sqrt(2.0 * M_PI * psi2(model, a) * x));
    double log_lhs, rel_se = 0.0;
    if (brownian) {
      log_lhs = part == 2 ? log_upper_trunc_brownian(model, kappa, x, b)
                          : truncated_exp_moment(model, kappa, x, b,
                                                 TruncMethod::ClosedForm)
                                .log_value;
    } else {
      // Tilt to the saddle a so the truncation boundary becomes central,
      // then average the bounded likelihood ratio e^{(kappa-a)(Y-b)} over
      // the relevant side of b; the analytic prefactor e^{(kappa-a)b +
      // psi(a)x} is restored in log space.
      const LevyModel twisted = tilt(model, a);
      constexpr std::int64_t kChunk = 1 << 14;
      const std::int64_t chunks = (opts.replicates + kChunk - 1) / kChunk;
      std::vector<CompensatedSum> sums(chunks), squares(chunks);
      const int side = part == 2 ? 1 : -1;
      parallel_for(chunks, opts.threads, [&](std::int64_t c) {
        const std::int64_t begin = c * kChunk;
        const std::int64_t end = std::min(opts.replicates, begin + kChunk);
        CompensatedSum sum, sq;
        for (std::int64_t r = begin; r < end; ++r) {
          RngStream stream(opts.seed,
                           0x74727563ULL ^ static_cast<std::uint64_t>(idx),
                           static_cast<std::uint64_t>(r));
          const double y = sample_increment(twisted, x, stream);
          const bool keep = side > 0 ? y > b : y <= b;
          if (keep) {
            const double w = std::exp((kappa - a) * (y - b));
            sum.add(w);
            sq.add(w * w);
          }
        }
        sums[c] = sum;
        squares[c] = sq;
      });
      CompensatedSum sum, sq;
      for (std::int64_t c = 0; c < chunks; ++c) {
        sum.merge(sums[c]);
        sq.merge(squares[c]);
      }
      const double nrep = static_cast<double>(opts.replicates);
      const double m = sum.value() / nrep;
      if (!(m > 0.0))
        throw std::runtime_error("tilted MC saw no mass on the truncation side");
      const double var = std::max(0.0, sq.value() / nrep - m * m);
      rel_se = std::sqrt(var / nrep) / m;
      log_lhs = std::log(m) + (kappa - a) * b + psi(model, a) * x;
    }
    const double ratio = std::exp(log_lhs - log_rhs);
    report.rows.push_back(
        CheckRow::make("ratio/" + tag, ratio, 1.0, tol + 3.0 * rel_se * ratio,
                       rel_se * ratio));
  }
  return report;
}

CheckReport verify_bahadur_rao(const LevyModel& model, double beta,
                               const std::vector<double>& horizons,
                               std::vector<double> tolerances,
                               const McOptions& opts) {
  if (horizons.empty()) throw std::invalid_argument("no horizons given");
  const RateProfile profile(model);
  const double b0 = beta0(model);
  if (!(beta > b0))
    throw std::invalid_argument(
        "sharp large deviations need beta > beta0 (zero-rate edge excluded)");
  const RateValue rv = rate_eval(profile, beta);
  const double alpha = rv.u;
  if (tolerances.empty())
    tolerances.assign(horizons.size(), std::numeric_limits<double>::infinity());
  if (tolerances.size() != horizons.size())
    throw std::invalid_argument("one tolerance per horizon required");

  CheckReport report;
  report.check = "bahadur-rao";
  report.params = {{"model", model.describe()},
                   {"beta", beta},
                   {"alpha", alpha},
                   {"rate", rv.value},
                   {"seed", opts.seed}};

  const bool brownian = model.kind == LevyModel::Kind::BrownianMotion;
  std::vector<double> ratios;
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    const double t = horizons[i];
    const double log_rhs =
        -rv.value * t -
        std::log(alpha * std::sqrt(2.0 * M_PI * psi2(model, alpha) * t));
    double log_lhs, se_ratio = 0.0;
    if (brownian) {
      log_lhs = log_normal_sf((beta - model.mu) * std::sqrt(t) / model.sigma);
    } else {
      // Exponential tilting: under the alpha-twist the event is central;
      // average the likelihood ratio e^{-alpha y + psi(alpha) t} over hits.
      const LevyModel twisted = tilt(model, alpha);
      constexpr std::int64_t kChunk = 1 << 14;
      const std::int64_t chunks = (opts.replicates + kChunk - 1) / kChunk;
      std::vector<CompensatedSum> sums(chunks), squares(chunks);
      parallel_for(chunks, opts.threads, [&](std::int64_t c) {
        const std::int64_t begin = c * kChunk;
        const std::int64_t end = std::min(opts.replicates, begin + kChunk);
        CompensatedSum s, s2;
        for (std::int64_t r = begin; r < end; ++r) {
          RngStream stream(opts.seed, 0x6272616FULL ^ static_cast<std::uint64_t>(i),
                           static_cast<std::uint64_t>(r));
          const double y = sample_increment(twisted, t, stream);
          if (y >= beta * t) {
            const double w = std::exp(-alpha * y + psi(model, alpha) * t);
            s.add(w);
            s2.add(w * w);
          }
        }
        sums[c] = s;
        squares[c] = s2;
      });
      CompensatedSum s, s2;
      for (std::int64_t c = 0; c < chunks; ++c) {
        s.merge(sums[c]);
        s2.merge(squares[c]);
      }
      const double n = static_cast<double>(opts.replicates);
      const double m = s.value() / n;
      if (!(m > 0.0))
        throw std::runtime_error("importance sampler saw no exceedances");
      const double var = std::max(0.0, s2.value() / n - m * m);
      se_ratio = std::sqrt(var / n) / m;
      log_lhs = std::log(m);
    }
    const double ratio = std::exp(log_lhs - log_rhs);
    ratios.push_back(ratio);
    report.rows.push_back(CheckRow::make(
        "ratio/T=" + std::to_string(t), ratio, 1.0,
        tolerances[i] + 3.0 * se_ratio * ratio, se_ratio * ratio));
  }
  // |ratio - 1| must improve along the schedule.
  bool improving = true;
  for (std::size_t i = 1; i < ratios.size(); ++i)
    improving = improving &&
                std::abs(ratios[i] - 1.0) <= std::abs(ratios[i - 1] - 1.0);
  report.rows.push_back(
      CheckRow::make("improving-with-T", improving ? 1.0 : 0.0, 1.0, 0.0));
  return report;
}

CheckReport verify_order_stats(const EnsembleSpec& spec,
                               const OrderStatsOptions& opts) {
  EnsembleSpec run = spec;
  run.top_k = std::max(run.top_k, opts.top_k);
  const EnsembleSummary summary = simulate_ensemble(run);
  if (summary.mode != NormalizationMode::StableCentered)
    throw std::invalid_argument("order-statistics checks need the fast regime");
  const double alpha = summary.regime.alpha;
  const std::int64_t r_count = summary.replicates;
  const double big_n = static_cast<double>(summary.N);

  double tau_min = std::numeric_limits<double>::infinity();
  for (double t : opts.taus) tau_min = std::min(tau_min, t);
  for (const auto& [k, t] : opts.moments) tau_min = std::min(tau_min, t);

  CheckReport report;
  report.check = "order-stats";
  report.params = {{"model", spec.model.describe()},
                   {"N", summary.N},
                   {"s", summary.s},
                   {"alpha", alpha},
                   {"replicates", r_count},
                   {"seed", spec.seed},
                   {"lattice_warning", summary.lattice_warning}};

  // Coverage: every summand above tau_min must be inside the stored top-k.
  for (const auto& top : summary.top)
    if (!top.empty() && static_cast<int>(top.size()) == run.top_k &&
        top.back() > tau_min)
      throw std::runtime_error("top-k too small to cover the requested taus");

  // (a) law of the largest scaled summand: Frechet(alpha).
  if (opts.check_frechet) {
    std::vector<double> maxima(static_cast<std::size_t>(r_count), 0.0);
    for (std::int64_t r = 0; r < r_count; ++r) {
      const auto& top = summary.top[static_cast<std::size_t>(r)];
      maxima[static_cast<std::size_t>(r)] = top.empty() ? 0.0 : top.front();
    }
    const KsResult ks =
        ks_test(maxima, [alpha](double u) { return frechet_cdf(u, alpha); });
    report.params["frechet_ks_p"] = ks.p_value;
    report.rows.push_back(
        CheckRow::make("frechet-ks-D", ks.statistic, 0.0,
                       ks_critical_value(maxima.size(), 1e-3)));
  }

  // (b) tail counts: N P[W > tau] -> tau^{-alpha}.
  for (double tau : opts.taus) {
    std::vector<double> counts(static_cast<std::size_t>(r_count), 0.0);
    for (std::int64_t r = 0; r < r_count; ++r) {
      const auto& top = summary.top[static_cast<std::size_t>(r)];
      counts[static_cast<std::size_t>(r)] = static_cast<double>(
          std::count_if(top.begin(), top.end(), [tau](double w) { return w > tau; }));
    }
    const double obs = mean(counts);
    const double se = std::sqrt(variance(counts) / static_cast<double>(r_count));
    report.rows.push_back(CheckRow::make("tail-count/tau=" + std::to_string(tau),
                                         obs, std::pow(tau, -alpha),
                                         opts.sigma_band * se, se));
  }

  // (c) truncated moments: N E[W^kappa 1{W > tau}] -> alpha/(alpha-kappa)
  // tau^{kappa-alpha} for kappa < alpha.
  for (const auto& [kappa, tau] : opts.moments) {
    if (!(kappa < alpha))
      throw std::invalid_argument("moment check needs kappa < alpha");
    std::vector<double> vals(static_cast<std::size_t>(r_count), 0.0);
    for (std::int64_t r = 0; r < r_count; ++r) {
      double acc = 0.0;
      for (double w : summary.top[static_cast<std::size_t>(r)])
        if (w > tau) acc += std::pow(w, kappa);
      vals[static_cast<std::size_t>(r)] = acc;
    }
    const double obs = mean(vals);
    const double se = std::sqrt(variance(vals) / static_cast<double>(r_count));
    const double ref = alpha / (alpha - kappa) * std::pow(tau, kappa - alpha);
    report.rows.push_back(CheckRow::make(
        "tail-moment/kappa=" + std::to_string(kappa) + ",tau=" + std::to_string(tau),
        obs, ref, opts.sigma_band * se, se));
  }

  // Hill tail index of the normalized marginals at t = 0.
  std::ptrdiff_t origin = -1;
  for (std::size_t j = 0; j < summary.grid.size(); ++j)
    if (summary.grid[j] == 0.0) origin = static_cast<std::ptrdiff_t>(j);
  if (origin >= 0 && opts.hill_k >= 0) {
    const std::vector<double> col = summary.column(static_cast<std::size_t>(origin));
    const int k = opts.hill_k > 0 ? opts.hill_k : hill_default_k(col.size());
    const double hill = hill_estimator(col, k);
    report.params["hill_k"] = k;
    report.rows.push_back(
        CheckRow::make("hill-alpha", hill, alpha, opts.hill_tolerance));
  }

  // Exact finite-size tail references for Brownian models, for diagnosis.
  if (spec.model.kind == LevyModel::Kind::BrownianMotion) {
    nlohmann::json finite = nlohmann::json::object();
    const double b0 = log_scaling_B(spec.model, alpha, summary.N, summary.s, 0.0);
    const double sd = spec.model.sigma * std::sqrt(summary.s);
    for (double tau : opts.taus) {
      const double z = (b0 + std::log(tau) - spec.model.mu * summary.s) / sd;
      finite["tail-count/tau=" + std::to_string(tau)] =
          big_n * normal_sf(z);
    }
    report.params["finite_size_reference"] = finite;
  }
  return report;
}

CheckReport verify_covariance(const LevyModel& model,
                              const std::vector<double>& grid,
                              CovarianceMode mode, std::int64_t samples,
                              const McOptions& opts, double sigma_band) {
  const GridSpec gs = GridSpec::make(grid, mode != CovarianceMode::Ou);
  const std::size_t d = gs.times.size();
  const std::size_t n = static_cast<std::size_t>(samples);
  if (samples < 16) throw std::invalid_argument("need at least 16 samples");

  std::vector<double> data(n * d);
  const char* mode_name = "";
  switch (mode) {
    case CovarianceMode::RawExp: {
      mode_name = "raw-exp";
      parallel_for(samples, opts.threads, [&](std::int64_t i) {
        RngStream stream(opts.seed, 0x636F76ULL, static_cast<std::uint64_t>(i));
        const std::vector<double> xi = sample_path(model, gs.times, stream);
        for (std::size_t j = 0; j < d; ++j)
          data[static_cast<std::size_t>(i) * d + j] = std::exp(xi[j]);
      });
      break;
    }
    case CovarianceMode::Ou: {
      mode_name = "ou";
      parallel_for(samples, opts.threads, [&](std::int64_t i) {
        RngStream stream(opts.seed, 0x6F75ULL, static_cast<std::uint64_t>(i));
        const std::vector<double> x = sample_ou(model, gs, stream);
        for (std::size_t j = 0; j < d; ++j)
          data[static_cast<std::size_t>(i) * d + j] = x[j];
      });
      break;
    }
    case CovarianceMode::CltGaussian: {
      mode_name = "clt-gaussian";
      const CltGaussianSampler sampler(model, gs);
      parallel_for(samples, opts.threads, [&](std::int64_t i) {
        RngStream stream(opts.seed, 0x636C74ULL, static_cast<std::uint64_t>(i));
        const std::vector<double> x = sampler.sample(stream);
        for (std::size_t j = 0; j < d; ++j)
          data[static_cast<std::size_t>(i) * d + j] = x[j];
      });
      break;
    }
  }

  const double p1 = psi(model, 1.0);
  const double p2 = psi(model, 2.0);
  auto reference = [&](std::size_t j, std::size_t l) {
    const double t1 = gs.times[j], t2 = gs.times[l];  // j <= l
    switch (mode) {
      case CovarianceMode::RawExp:
      case CovarianceMode::CltGaussian:
        return std::exp(p2 * t1 + p1 * (t2 - t1)) - std::exp(p1 * (t1 + t2));
      case CovarianceMode::Ou:
        return std::exp((p1 - p2 / 2.0) * (t2 - t1));
    }
    return 0.0;
  };

  CheckReport report;
  report.check = "covariance";
  report.params = {{"model", model.describe()},
                   {"mode", mode_name},
                   {"samples", samples},
                   {"grid", grid},
                   {"seed", opts.seed}};

  std::vector<double> means(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    CompensatedSum s;
    for (std::size_t i = 0; i < n; ++i) s.add(data[i * d + j]);
    means[j] = s.value() / static_cast<double>(n);
  }
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t l = j; l < d; ++l) {
      CompensatedSum s, s2;
      for (std::size_t i = 0; i < n; ++i) {
        const double p = (data[i * d + j] - means[j]) * (data[i * d + l] - means[l]);
        s.add(p);
        s2.add(p * p);
      }
      const double c = s.value() / static_cast<double>(n - 1);
      const double var_p =
          std::max(0.0, s2.value() / static_cast<double>(n) -
                            (s.value() / static_cast<double>(n)) *
                                (s.value() / static_cast<double>(n)));
      const double se = std::sqrt(var_p / static_cast<double>(n));
      const double tol =
          std::max(sigma_band * se, 1e-12 * (1.0 + std::abs(reference(j, l))));
      report.rows.push_back(CheckRow::make(
          "cov(" + std::to_string(gs.times[j]) + "," + std::to_string(gs.times[l]) +
              ")",
          c, reference(j, l), tol, se));
    }
  }
  return report;
}

CheckReport verify_critical_variance(const LevyModel& model, double theta,
                                     double s, std::int64_t replicates,
                                     const McOptions& opts, double threshold,
                                     double tolerance) {
  EnsembleSpec spec;
  spec.model = model;
  spec.rule = GrowthRule::critical(theta, s);
  spec.replicates = replicates;
  spec.grid = {0.0};
  spec.seed = opts.seed;
  spec.top_k = 64;
  spec.threads = opts.threads;
  const EnsembleSummary summary = simulate_ensemble(spec);

  std::vector<double> trimmed(static_cast<std::size_t>(replicates));
  for (std::int64_t r = 0; r < replicates; ++r) {
    const auto& top = summary.top[static_cast<std::size_t>(r)];
    if (static_cast<int>(top.size()) == spec.top_k && top.back() > threshold)
      throw std::runtime_error("top-k too small for the trimming threshold");
    double spikes = 0.0;
    for (double w : top)
      if (w > threshold) spikes += w;
    trimmed[static_cast<std::size_t>(r)] = summary.normalized_at(r, 0) - spikes;
  }
  const double obs = variance(trimmed);

  CheckReport report;
  report.check = "critical-variance";
  report.params = {{"model", model.describe()},
                   {"theta", theta},
                   {"s", s},
                   {"N", summary.N},
                   {"replicates", replicates},
                   {"threshold", threshold},
                   {"seed", opts.seed},
                   {"finite_size_reference",
                    normal_cdf(theta + std::log(threshold) /
                                           std::sqrt(psi2(model, 2.0) * s))}};
  report.rows.push_back(CheckRow::make("trimmed-variance", obs,
                                       normal_cdf(theta), tolerance));
  return report;
}

CheckReport verify_slow_gaussian(const EnsembleSpec& spec, double ks_p_floor,
                                 double corr_tolerance) {
  const EnsembleSummary summary = simulate_ensemble(spec);
  if (summary.mode != NormalizationMode::GaussianMeanVar)
    throw std::invalid_argument("slow-regime check needs variance normalization");

  CheckReport report;
  report.check = "slow-gaussian";
  report.params = {{"model", spec.model.describe()},
                   {"N", summary.N},
                   {"s", summary.s},
                   {"replicates", summary.replicates},
                   {"seed", spec.seed}};

  const std::vector<double> col0 = summary.column(0);
  const KsResult ks = ks_test(col0, [](double x) { return normal_cdf(x); });
  report.params["normal_ks_p"] = ks.p_value;
  report.rows.push_back(CheckRow::make(
      "normal-ks-D", ks.statistic, 0.0, ks_critical_value(col0.size(), ks_p_floor)));

  if (summary.grid.size() > 1) {
    const std::vector<double> col1 = summary.column(1);
    const double delta = summary.grid[1] - summary.grid[0];
    const double ref =
        std::exp((psi(spec.model, 1.0) - psi(spec.model, 2.0) / 2.0) * delta);
    report.rows.push_back(CheckRow::make("lag-correlation",
                                         correlation(col0, col1), ref,
                                         corr_tolerance));
  }
  return report;
}

CheckReport verify_stable_marginal(const LevyModel& model, double tau,
                                   std::int64_t samples, const McOptions& opts,
                                   double ks_p_floor) {
  const GridSpec grid = GridSpec::make({0.0}, true);
  const PoissonSeriesConfig cfg = PoissonSeriesConfig::with_truncation(tau);
  std::vector<double> values(static_cast<std::size_t>(samples));
  parallel_for(samples, opts.threads, [&](std::int64_t i) {
    values[static_cast<std::size_t>(i)] =
        sample_stable_series(model, 0.5, grid, cfg, opts.seed,
                             static_cast<std::uint64_t>(i))
            .path[0];
  });
  const KsResult ks = ks_test(values, stable_half_cdf);

  CheckReport report;
  report.check = "stable-marginal";
  report.params = {{"model", model.describe()},
                   {"alpha", 0.5},
                   {"tau", tau},
                   {"samples", samples},
                   {"seed", opts.seed},
                   {"ks_p", ks.p_value}};
  report.rows.push_back(
      CheckRow::make("stable-ks-D", ks.statistic, 0.0,
                     ks_critical_value(values.size(), ks_p_floor)));
  return report;
}

CheckReport verify_stable_residual(const LevyModel& model, double alpha,
                                   double tau, std::int64_t runs,
                                   const McOptions& opts, double tolerance) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::invalid_argument("residual mass check needs alpha in (0,1)");
  // Atoms are collected down to a floor far below tau; the un-simulated mass
  // below the floor contributes (floor/tau)^{1-alpha} relative bias.
  const double floor = tau * 1e-5;
  const double gamma_lo = std::pow(tau, -alpha);
  const double gamma_hi = std::pow(floor, -alpha);
  std::vector<double> masses(static_cast<std::size_t>(runs));
  parallel_for(runs, opts.threads, [&](std::int64_t r) {
    RngStream arrivals(opts.seed, static_cast<std::uint64_t>(r), ~0ULL);
    double gamma = 0.0;
    CompensatedSum mass;
    for (;;) {
      gamma += arrivals.exponential();
      if (gamma >= gamma_hi) break;
      if (gamma >= gamma_lo) mass.add(std::pow(gamma, -1.0 / alpha));
    }
    masses[static_cast<std::size_t>(r)] = mass.value();
  });
  const double obs = mean(masses);
  const double se = std::sqrt(variance(masses) / static_cast<double>(runs));
  const double ref = alpha * std::pow(tau, 1.0 - alpha) / (1.0 - alpha);

  CheckReport report;
  report.check = "stable-residual";
  report.params = {{"model", model.describe()}, {"alpha", alpha},
                   {"tau", tau},                {"floor", floor},
                   {"runs", runs},              {"seed", opts.seed}};
  report.rows.push_back(
      CheckRow::make("discarded-mass", obs, ref, tolerance, se));
  return report;
}

CheckReport verify_ou_stationarity(const LevyModel& model, double dt,
                                   std::int64_t steps, const McOptions& opts,
                                   double var_tolerance, double corr_tolerance) {
  std::vector<double> times(static_cast<std::size_t>(steps));
  for (std::int64_t j = 0; j < steps; ++j)
    times[static_cast<std::size_t>(j)] = dt * static_cast<double>(j);
  RngStream stream(opts.seed, 0x6F757374ULL, 0);
  const std::vector<double> path = sample_ou(model, GridSpec::make(times), stream);
  const std::span<const double> head(path.data(), path.size() - 1);
  const std::span<const double> tail(path.data() + 1, path.size() - 1);
  const double ref =
      std::exp((psi(model, 1.0) - psi(model, 2.0) / 2.0) * dt);

  CheckReport report;
  report.check = "ou-stationarity";
  report.params = {{"model", model.describe()},
                   {"dt", dt},
                   {"steps", steps},
                   {"seed", opts.seed}};
  report.rows.push_back(
      CheckRow::make("marginal-variance", variance(path), 1.0, var_tolerance));
  report.rows.push_back(
      CheckRow::make("lag-1-correlation", correlation(head, tail), ref,
                     corr_tolerance));
  return report;
}

CheckReport verify_partition_mean(double beta, int n, std::int64_t replicates,
                                  const McOptions& opts, double sigma_band) {
  if (!(beta > 0.0) || n < 1 || n > 62)
    throw std::invalid_argument("partition preset needs beta > 0, 1 <= n <= 62");
  EnsembleSpec spec;
  spec.model = LevyModel::brownian(0.0, 1.0);
  spec.N = std::int64_t{1} << n;
  // The pair (N = 2^n, s = beta^2 n) sits exactly on the proportional law
  // with rate log(2)/beta^2, which also classifies the regime.
  spec.rule = GrowthRule::proportional(std::log(2.0) / (beta * beta));
  spec.replicates = replicates;
  spec.grid = {0.0};
  spec.seed = opts.seed;
  spec.threads = opts.threads;

  const EnsembleSummary summary = simulate_ensemble(spec);
  std::vector<double> raw(static_cast<std::size_t>(replicates));
  for (std::int64_t r = 0; r < replicates; ++r)
    raw[static_cast<std::size_t>(r)] = summary.raw_at(r, 0);
  const Moments m = moments_exact(spec.model, spec.N, summary.s, 0.0);
  const double se = std::sqrt(m.variance / static_cast<double>(replicates));

  CheckReport report;
  report.check = "partition-mean";
  report.params = {{"beta", beta},
                   {"n", n},
                   {"N", spec.N},
                   {"s", summary.s},
                   {"regime", summary.regime.name()},
                   {"replicates", replicates},
                   {"seed", opts.seed}};
  report.rows.push_back(
      CheckRow::make("mean-Z", mean(raw), m.mean, sigma_band * se, se));
  return report;
}

}  // namespace levysum
