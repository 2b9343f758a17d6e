#pragma once

// Variance of the complete U-statistic of a test's rejection indicator, the
// equivalent independent sample size (EISS) it implies, and the simulation
// studies that measure it.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "credibility/error.hpp"
#include "credibility/goftests.hpp"
#include "credibility/parallel.hpp"
#include "credibility/resample.hpp"
#include "credibility/statdist.hpp"

namespace credibility {

/// Var(U_comp) = sum_i P(overlap = i) sigma_i^2, where sigma_sq[i-1] is the
/// covariance of the kernel on two subsets sharing i points.
inline double ucomp_variance_exact(std::span<const double> sigma_sq, std::int64_t n, std::int64_t m) {
  detail::require(m >= 1 && n >= 1, "ucomp variance: n and m must be positive");
  detail::require(m <= n, "ucomp variance: m must not exceed n");
  detail::require(static_cast<std::int64_t>(sigma_sq.size()) == m, "ucomp variance: need exactly m sigma^2 terms");
  double total = 0.0;
  for (std::int64_t i = 1; i <= m; ++i) {
    const double s = sigma_sq[static_cast<std::size_t>(i - 1)];
    detail::require(s >= 0.0, "ucomp variance: sigma^2 terms must be nonnegative");
    total += overlap_pmf(n, m, i) * s;
  }
  return total;
}

using SubsetKernel = std::function<double(std::span<const double>)>;

/// Exact complete U-statistic: the kernel averaged over every m-subset of
/// the data. Limited to C(n, m) <= 10^6 subsets.
inline double ucomp_small_oracle(std::span<const double> data, std::size_t m, const SubsetKernel& kernel) {
  const std::size_t n = data.size();
  detail::require(m >= 1 && m <= n, "complete U-statistic: need 1 <= m <= n");
  detail::require(log_choose(static_cast<std::int64_t>(n), static_cast<std::int64_t>(m)) <= std::log(1e6) + 1e-9,
                  "complete U-statistic: C(n, m) exceeds the 10^6 subset budget");
  std::vector<std::size_t> idx(m);
  for (std::size_t i = 0; i < m; ++i) idx[i] = i;
  std::vector<double> subset(m);
  double sum = 0.0;
  std::size_t count = 0;
  while (true) {
    for (std::size_t i = 0; i < m; ++i) subset[i] = data[idx[i]];
    sum += kernel(subset);
    ++count;
    std::size_t pos = m;
    while (pos > 0 && idx[pos - 1] == n - m + pos - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t j = pos; j < m; ++j) idx[j] = idx[j - 1] + 1;
  }
  return sum / static_cast<double>(count);
}

/// Complete U-statistic of a one-sample test's rejection indicator.
inline double ucomp_small_oracle(std::span<const double> data, std::size_t m, const TestSpec& spec) {
  spec.validate();
  detail::require(is_one_sample(spec.test), "complete U-statistic needs a one-sample test");
  return ucomp_small_oracle(data, m, [&](std::span<const double> subset) {
    return run_one_sample(spec, subset).reject ? 1.0 : 0.0;
  });
}

/// The U-statistic bound Var(U_comp) <= beta (1 - beta) m / n.
inline double variance_bound(double beta, std::int64_t n, std::int64_t m) {
  detail::require(beta >= 0.0 && beta <= 1.0, "variance bound: beta must be a probability");
  detail::require(m >= 1 && m <= n, "variance bound: need 1 <= m <= n");
  return beta * (1.0 - beta) * static_cast<double>(m) / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// Local-alternative limit of E[K(S1) K(S2) | overlap fraction a]

struct LocalAltSpec {
  int d = 25;
  double delta = 3.67;
  double c_alpha = 37.66;
  double a = 0.5;
  std::size_t draws = 200000;

  void validate() const {
    detail::require(d >= 1, "local alternative: d must be >= 1");
    detail::require(delta >= 0.0 && std::isfinite(delta), "local alternative: delta must be nonnegative");
    detail::require(c_alpha > 0.0 && std::isfinite(c_alpha), "local alternative: c_alpha must be positive");
    detail::require(a >= 0.0 && a < 1.0, "local alternative: overlap fraction must lie in [0, 1)");
    detail::require(draws >= 2, "local alternative: need at least 2 draws");
  }
};

/// Conditional: average P(noncentral chi-square_d(R^2) > c/(1-a))^2 over
/// (Z, W), which is the exact inner expectation over X and Y of the
/// product form. Product: average the two G factors directly.
enum class LocalAltEstimator { Conditional, Product };

inline std::string to_string(LocalAltEstimator estimator) {
  return estimator == LocalAltEstimator::Conditional ? "conditional" : "product";
}

struct MonteCarloValue {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t draws = 0;
};

namespace detail {

/// G(t) = P(chi-square_{k} > t), with G = 1 for t < 0 and a point mass at
/// zero when k = 0.
inline double chi_square_upper(int k, double t) {
  if (t < 0.0) return 1.0;
  if (k == 0) return 0.0;
  return survival(ChiSquare{k}, t);
}

inline MonteCarloValue summarize(const std::vector<double>& values) {
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double var = ss / static_cast<double>(values.size() - 1);
  return {mean, std::sqrt(var / static_cast<double>(values.size())), values.size()};
}

}  // namespace detail

inline MonteCarloValue local_alt_A(const LocalAltSpec& spec, SeedSpec seed,
                                   LocalAltEstimator estimator = LocalAltEstimator::Conditional,
                                   const Execution& exec = {}) {
  spec.validate();
  const double ratio = spec.a / (1.0 - spec.a);
  const double shift = spec.delta / std::sqrt(1.0 - spec.a);
  const double threshold = spec.c_alpha / (1.0 - spec.a);
  auto batch = run_replicates<double>(spec.draws, exec, [&](std::size_t i) {
    Rng rng(SeedSpec{seed.master_seed, seed.stream_id + i});
    const double z = rng.normal();
    const double w = spec.d > 1 ? rng.chi_square(spec.d - 1) : 0.0;
    const double centre = z * std::sqrt(ratio) + shift;
    const double r_sq = centre * centre + ratio * w;
    if (estimator == LocalAltEstimator::Conditional) {
      const double h = survival(NoncentralChiSquare{spec.d, r_sq}, threshold);
      return h * h;
    }
    const double r = std::sqrt(r_sq);
    const double x = rng.normal();
    const double y = rng.normal();
    return detail::chi_square_upper(spec.d - 1, threshold - (x + r) * (x + r)) *
           detail::chi_square_upper(spec.d - 1, threshold - (y + r) * (y + r));
  });
  if (batch.failures > 0) {
    throw NumericError("local alternative draw " + std::to_string(batch.first_failure) + ": " +
                       batch.first_failure_message);
  }
  return detail::summarize(batch.values);
}

/// What the replicate power is centred on when turning A into a variance:
/// the nominal 1/2 the delta calibration aims at, or the exact limiting
/// power P(noncentral chi-square_d(delta^2) > c).
enum class PowerCentering { NominalHalf, ExactPower };

inline std::string to_string(PowerCentering centering) {
  return centering == PowerCentering::NominalHalf ? "nominal-half" : "exact-power";
}

struct VarianceReport {
  double variance = 0.0;
  double eiss = 0.0;
  double bound_phi_inv = 0.0;
  double beta = 0.5;
  double a_value = 0.0;
  double a_std_error = 0.0;
  double c_alpha = 0.0;
};

/// EISS of the subsampling power estimator at sampling fraction phi in the
/// local-alternative limit: overlap concentrates at a = phi, so
/// variance = A - beta^2 and EISS = beta (1 - beta) / variance.
inline VarianceReport eiss_local(double phi, int d, double alpha, double delta, std::size_t draws, SeedSpec seed,
                                 PowerCentering centering = PowerCentering::NominalHalf,
                                 LocalAltEstimator estimator = LocalAltEstimator::Conditional,
                                 const Execution& exec = {}, std::optional<double> c_alpha = std::nullopt) {
  detail::require(phi > 0.0 && phi < 1.0, "eiss: sampling fraction phi must lie in (0, 1)");
  detail::require(alpha > 0.0 && alpha < 0.5, "test size alpha must lie in (0, 0.5)");
  LocalAltSpec spec;
  spec.d = d;
  spec.delta = delta;
  spec.c_alpha = c_alpha.value_or(quantile(ChiSquare{d}, 1.0 - alpha));
  spec.a = phi;
  spec.draws = draws;
  const auto a_value = local_alt_A(spec, seed, estimator, exec);

  VarianceReport report;
  report.c_alpha = spec.c_alpha;
  report.beta = centering == PowerCentering::NominalHalf
                    ? 0.5
                    : survival(NoncentralChiSquare{d, delta * delta}, spec.c_alpha);
  report.a_value = a_value.value;
  report.a_std_error = a_value.std_error;
  report.variance = a_value.value - report.beta * report.beta;
  report.bound_phi_inv = 1.0 / phi;
  if (report.variance <= 2.0 * a_value.std_error) {
    throw NumericError("eiss: estimated variance " + std::to_string(report.variance) +
                       " is not positive beyond Monte Carlo error (" + std::to_string(a_value.std_error) +
                       ") at phi=" + std::to_string(phi) + "; A=" + std::to_string(a_value.value) +
                       " against beta^2=" + std::to_string(report.beta * report.beta) +
                       " (more draws or the exact-power centering may help)");
  }
  report.eiss = report.beta * (1.0 - report.beta) / report.variance;
  return report;
}

// ---------------------------------------------------------------------------
// Finite-population study: spread of the power estimate across datasets

struct EstimatorDistribution {
  double mean = 0.0;
  double sd = 0.0;
  double eiss_empirical = 0.0;
  std::vector<double> estimates;  // one beta-hat per dataset
};

/// Draws `datasets` independent size-n datasets from `truth`, estimates the
/// size-m power of each by resampling, and summarizes the estimates.
inline EstimatorDistribution simulate_estimator_distribution(const DistributionFamily& truth, std::size_t n,
                                                             std::size_t m, std::size_t datasets,
                                                             std::size_t replicates, ResampleScheme scheme,
                                                             const TestSpec& spec, SeedSpec seed,
                                                             const Execution& exec = {}) {
  validate(truth);
  detail::require(datasets >= 50, "simulation needs at least 50 datasets");
  detail::require(replicates >= 1, "simulation needs replicates >= 1");
  detail::require(n >= 1, "simulation needs n >= 1");
  EstimatorDistribution out;
  out.estimates.reserve(datasets);
  for (std::size_t k = 0; k < datasets; ++k) {
    const Sample data = sample(truth, n, SeedSpec{derive_seed(seed.master_seed, 2 * k), seed.stream_id});
    const SeedSpec resample_seed{derive_seed(seed.master_seed, 2 * k + 1), seed.stream_id};
    out.estimates.push_back(estimate_power(data, spec, m, replicates, scheme, resample_seed, exec).beta_hat);
  }
  const auto [mean, sd] = detail::mean_sd(out.estimates, 1);
  out.mean = mean;
  out.sd = sd;
  out.eiss_empirical = sd > 0.0 ? mean * (1.0 - mean) / (sd * sd) : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace credibility
