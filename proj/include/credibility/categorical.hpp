#pragma once

// Contingency-table credibility: independence fit, deviance and Pearson
// distances, the two closed-form N* approximations, and resampling-based N*
// and confidence intervals.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "credibility/credindex.hpp"
#include "credibility/error.hpp"
#include "credibility/goftests.hpp"
#include "credibility/parallel.hpp"
#include "credibility/resample.hpp"
#include "credibility/statdist.hpp"

namespace credibility {

/// R x C grid of nonnegative counts, stored row-major.
class ContingencyTable {
 public:
  ContingencyTable(std::size_t rows, std::size_t cols, std::vector<std::int64_t> counts)
      : rows_(rows), cols_(cols), counts_(std::move(counts)) {
    detail::require(rows_ >= 2 && cols_ >= 2, "contingency table needs at least 2 rows and 2 columns");
    detail::require(counts_.size() == rows_ * cols_, "contingency table: count grid has the wrong size");
    for (auto c : counts_) {
      detail::require(c >= 0, "contingency table: counts must be nonnegative");
      total_ += c;
    }
  }

  static ContingencyTable from_rows(const std::vector<std::vector<std::int64_t>>& grid) {
    detail::require(!grid.empty(), "contingency table: no rows");
    const std::size_t cols = grid.front().size();
    std::vector<std::int64_t> counts;
    for (const auto& row : grid) {
      detail::require(row.size() == cols, "contingency table: ragged rows");
      counts.insert(counts.end(), row.begin(), row.end());
    }
    return {grid.size(), cols, std::move(counts)};
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t cells() const { return counts_.size(); }
  std::int64_t total() const { return total_; }
  std::int64_t at(std::size_t r, std::size_t c) const { return counts_[r * cols_ + c]; }
  const std::vector<std::int64_t>& counts() const { return counts_; }

  std::int64_t row_total(std::size_t r) const {
    std::int64_t s = 0;
    for (std::size_t c = 0; c < cols_; ++c) s += at(r, c);
    return s;
  }
  std::int64_t col_total(std::size_t c) const {
    std::int64_t s = 0;
    for (std::size_t r = 0; r < rows_; ++r) s += at(r, c);
    return s;
  }
  bool has_positive_margins() const {
    for (std::size_t r = 0; r < rows_; ++r)
      if (row_total(r) == 0) return false;
    for (std::size_t c = 0; c < cols_; ++c)
      if (col_total(c) == 0) return false;
    return true;
  }

  /// Same shape, every count multiplied by `factor`.
  ContingencyTable scaled(std::int64_t factor) const {
    auto counts = counts_;
    for (auto& c : counts) c *= factor;
    return {rows_, cols_, std::move(counts)};
  }

  friend bool operator==(const ContingencyTable&, const ContingencyTable&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::int64_t> counts_;
  std::int64_t total_ = 0;
};

/// A model's fitted cell probabilities together with the distances from the
/// empirical distribution to them.
struct MultinomialFit {
  std::vector<double> fitted;  // row-major, sums to 1
  int df = 0;
  double g2 = 0.0;             // 2 sum n(t) log(n(t) / (n F(t)))
  double x2 = 0.0;             // sum (n(t) - n F(t))^2 / (n F(t))
  double kl_rate = 0.0;        // g2 / (2n)
  std::int64_t n = 0;
};

/// Distances for any model whose KL projection of the table is `fitted`.
inline MultinomialFit fit_from_probabilities(const ContingencyTable& table, std::vector<double> fitted, int df) {
  detail::require(fitted.size() == table.cells(), "fitted probabilities do not match the table");
  detail::require(table.total() > 0, "contingency table is empty");
  MultinomialFit fit;
  fit.n = table.total();
  fit.df = df;
  const double n = static_cast<double>(table.total());
  for (std::size_t t = 0; t < fitted.size(); ++t) {
    const double observed = static_cast<double>(table.counts()[t]);
    const double expected = n * fitted[t];
    if (observed > 0.0) {
      detail::require(expected > 0.0, "fitted probability is zero for an observed cell");
      fit.g2 += 2.0 * observed * std::log(observed / expected);
    }
    if (expected > 0.0) fit.x2 += (observed - expected) * (observed - expected) / expected;
  }
  fit.g2 = std::max(0.0, fit.g2);
  fit.kl_rate = fit.g2 / (2.0 * n);
  fit.fitted = std::move(fitted);
  return fit;
}

/// Row-column independence: fitted(r,c) = (row_r/n)(col_c/n), the KL
/// projection of the empirical distribution onto the product family.
inline MultinomialFit fit_independence(const ContingencyTable& table) {
  detail::require(table.total() > 0, "contingency table is empty");
  if (!table.has_positive_margins()) {
    throw InputError("independence fit undefined: the table has a zero row or column margin");
  }
  const double n = static_cast<double>(table.total());
  std::vector<double> fitted(table.cells());
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < table.cols(); ++c) {
      fitted[r * table.cols() + c] =
          static_cast<double>(table.row_total(r)) / n * static_cast<double>(table.col_total(c)) / n;
    }
  }
  const int df = static_cast<int>((table.rows() - 1) * (table.cols() - 1));
  return fit_from_probabilities(table, std::move(fitted), df);
}

/// Independence deviance of a possibly sparse table: empty rows and columns
/// carry no information and are skipped.
inline double independence_deviance(const ContingencyTable& table) {
  const double n = static_cast<double>(table.total());
  if (n == 0.0) return 0.0;
  std::vector<double> row(table.rows());
  std::vector<double> col(table.cols());
  for (std::size_t r = 0; r < table.rows(); ++r) row[r] = static_cast<double>(table.row_total(r));
  for (std::size_t c = 0; c < table.cols(); ++c) col[c] = static_cast<double>(table.col_total(c));
  double g2 = 0.0;
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < table.cols(); ++c) {
      const double observed = static_cast<double>(table.at(r, c));
      if (observed > 0.0) g2 += 2.0 * observed * std::log(observed * n / (row[r] * col[c]));
    }
  }
  return std::max(0.0, g2);
}

/// Likelihood-ratio test of the fitted model: reject iff g2 exceeds the
/// upper-alpha chi-square point at the model df.
inline TestResult lrt_test(const ContingencyTable& table, const MultinomialFit& fit, double alpha) {
  detail::require(alpha > 0.0 && alpha < 0.5, "test size alpha must lie in (0, 0.5)");
  detail::require(fit.n == table.total(), "lrt_test: fit does not belong to this table");
  const double critical = quantile(ChiSquare{fit.df}, 1.0 - alpha);
  return detail::decide(fit.g2, critical, fit.df, survival(ChiSquare{fit.df}, fit.g2));
}

/// Noncentrality lambda at which a noncentral chi-square(df) exceeds the
/// central upper-alpha point with probability target_beta.
inline double solve_delta_star(int df, double alpha, double target_beta = 0.5) {
  detail::require(df >= 1, "solve_delta_star: df must be >= 1");
  detail::require(alpha > 0.0 && alpha < target_beta && target_beta <= 0.99,
                  "solve_delta_star needs 0 < alpha < target_beta <= 0.99");
  const double critical = quantile(ChiSquare{df}, 1.0 - alpha);
  auto power = [&](double lambda) { return survival(NoncentralChiSquare{df, lambda}, critical); };
  double lo = 0.0;
  double hi = 1.0;
  while (power(hi) < target_beta) hi *= 2.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double p = power(mid);
    if (std::abs(p - target_beta) < 1e-12 || hi - lo < 1e-14 * hi) return mid;
    (p < target_beta ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// n * chi2_df(alpha) / (2 * g2): inversely proportional to the likelihood
/// deviation. Infinite when the model fits exactly.
inline double nstar_asy(const ContingencyTable& table, const MultinomialFit& fit, double alpha) {
  detail::require(alpha > 0.0 && alpha < 0.5, "test size alpha must lie in (0, 0.5)");
  if (fit.g2 <= 0.0) return std::numeric_limits<double>::infinity();
  const double critical = quantile(ChiSquare{fit.df}, 1.0 - alpha);
  return static_cast<double>(table.total()) * critical / (2.0 * fit.g2);
}

/// n * lambda* / x2: the noncentrality needed for power 1/2 over the
/// per-observation Pearson distance.
inline double nstar_asy2(const ContingencyTable& table, const MultinomialFit& fit, double alpha,
                         double target_beta = 0.5) {
  if (fit.x2 <= 0.0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(table.total()) * solve_delta_star(fit.df, alpha, target_beta) / fit.x2;
}

namespace detail {

inline std::vector<std::int64_t> cumulative_counts(const ContingencyTable& table) {
  std::vector<std::int64_t> cumulative(table.cells());
  std::int64_t running = 0;
  for (std::size_t t = 0; t < table.cells(); ++t) {
    running += table.counts()[t];
    cumulative[t] = running;
  }
  return cumulative;
}

inline std::size_t cell_of(const std::vector<std::int64_t>& cumulative, std::int64_t individual) {
  return static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), individual) -
                                  cumulative.begin());
}

inline ContingencyTable multinomial_draw(const ContingencyTable& table,
                                         const std::vector<std::int64_t>& cumulative, std::size_t m,
                                         Rng& rng) {
  std::vector<std::int64_t> counts(table.cells(), 0);
  const auto n = static_cast<std::uint64_t>(table.total());
  for (std::size_t i = 0; i < m; ++i) {
    ++counts[cell_of(cumulative, static_cast<std::int64_t>(rng.below(n)))];
  }
  return {table.rows(), table.cols(), std::move(counts)};
}

inline ContingencyTable individual_subsample(const ContingencyTable& table,
                                             const std::vector<std::int64_t>& cumulative, std::size_t m,
                                             Rng& rng) {
  std::vector<std::int64_t> counts(table.cells(), 0);
  for (std::size_t idx : subsample_indices(static_cast<std::size_t>(table.total()), m, rng)) {
    ++counts[cell_of(cumulative, static_cast<std::int64_t>(idx))];
  }
  return {table.rows(), table.cols(), std::move(counts)};
}

}  // namespace detail

/// One Multinomial(m, d) draw over all cells, d the empirical cell
/// proportions (margins not fixed).
inline ContingencyTable multinomial_resample(const ContingencyTable& table, std::size_t m, SeedSpec seed) {
  detail::require(m >= 1, "multinomial resample: m must be >= 1");
  detail::require(table.total() > 0, "multinomial resample: table is empty");
  Rng rng(seed);
  return detail::multinomial_draw(table, detail::cumulative_counts(table), m, rng);
}

/// m of the n classified individuals drawn without replacement.
inline ContingencyTable subsample_table(const ContingencyTable& table, std::size_t m, SeedSpec seed) {
  detail::require(m >= 1 && static_cast<std::int64_t>(m) <= table.total(),
                  "table subsample: need 1 <= m <= n");
  Rng rng(seed);
  return detail::individual_subsample(table, detail::cumulative_counts(table), m, rng);
}

/// Power of the size-alpha independence LRT on size-m resamples of the table.
inline PowerPoint table_power(const ContingencyTable& table, double alpha, std::size_t m,
                              std::size_t replicates, ResampleScheme scheme, SeedSpec seed,
                              const Execution& exec = {}) {
  const auto fit = fit_independence(table);
  const double critical = quantile(ChiSquare{fit.df}, 1.0 - alpha);
  const auto cumulative = detail::cumulative_counts(table);
  if (scheme == ResampleScheme::Subsample) {
    detail::require(static_cast<std::int64_t>(m) <= table.total(), "subsampling needs m <= n");
  }
  return estimate_power_with(m, replicates, seed, exec, [&](std::size_t size, SeedSpec stream) {
    Rng rng(stream);
    const auto resampled = scheme == ResampleScheme::Bootstrap
                               ? detail::multinomial_draw(table, cumulative, size, rng)
                               : detail::individual_subsample(table, cumulative, size, rng);
    return independence_deviance(resampled) > critical;
  });
}

/// N* of the independence model for this table: the credibility search with
/// the LRT kernel, started at round(nstar_asy2).
inline CredibilityEstimate find_nstar_categorical(const ContingencyTable& table, double alpha,
                                                  ResampleScheme scheme, SeedSpec seed,
                                                  const SearchConfig& config, const Execution& exec = {},
                                                  double target_beta = 0.5) {
  config.validate();
  const auto fit = fit_independence(table);
  const auto n = static_cast<std::size_t>(table.total());
  CredibilityEstimate estimate;
  estimate.alpha = alpha;
  estimate.target_beta = target_beta;
  estimate.scheme = to_string(scheme);
  if (!lrt_test(table, fit, alpha).reject) {
    estimate.diagnostic = "the full table does not reject independence; N* is infinite";
    detail::attach_data_diagnostics(estimate, n);
    return estimate;
  }
  const double start = nstar_asy2(table, fit, alpha, target_beta >= 0.99 ? 0.99 : std::max(target_beta, alpha + 1e-6));
  const std::size_t default_cap = scheme == ResampleScheme::Subsample ? n : 4 * n;
  const std::size_t m_cap = config.m_cap.value_or(default_cap);
  if (scheme == ResampleScheme::Subsample) {
    detail::require(m_cap <= n, "m_cap must not exceed n under subsampling");
  }

  SearchProblem problem;
  problem.power = [&](std::size_t m, std::size_t replicates) {
    return table_power(table, alpha, m, replicates, scheme, seed, exec);
  };
  problem.m_min = 1;
  problem.m_cap = m_cap;
  problem.target_beta = target_beta;
  if (std::isfinite(start)) {
    problem.start_hint = std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(start)), 1, m_cap);
  }
  estimate = search_power_crossing(problem, config);
  estimate.alpha = alpha;
  estimate.scheme = to_string(scheme);
  detail::attach_data_diagnostics(estimate, n);
  return estimate;
}

struct NstarInterval {
  double lower = 0.0;
  double upper = 0.0;
  double median = 0.0;
  double level = 0.95;
  std::size_t replicates = 0;
  std::size_t redraws = 0;  // resamples discarded for a zero margin
};

namespace detail {

/// Type-7 (linear interpolation) quantile of sorted values.
inline double sorted_quantile(const std::vector<double>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  if (sorted[lo] == sorted[hi]) return sorted[lo];
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace detail

/// Percentile bootstrap interval of nstar_asy over B size-n multinomial
/// resamples. Resamples with an empty margin are redrawn; more than 1% of
/// redraws fails the job.
inline NstarInterval bootstrap_ci_nstar_asy(const ContingencyTable& table, double alpha, std::size_t replicates,
                                            double level, SeedSpec seed, const Execution& exec = {}) {
  detail::require(replicates >= 200, "bootstrap interval needs B >= 200");
  detail::require(level >= 0.0 && level < 1.0, "interval level must lie in [0, 1)");
  fit_independence(table);
  const auto cumulative = detail::cumulative_counts(table);
  const auto n = static_cast<std::size_t>(table.total());
  constexpr std::size_t kMaxAttempts = 1000;

  struct Draw {
    double value = 0.0;
    std::size_t redraws = 0;
  };
  auto batch = run_replicates<Draw>(replicates, exec, [&](std::size_t b) {
    for (std::size_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
      Rng rng(SeedSpec{seed.master_seed, seed.stream_id + (static_cast<std::uint64_t>(attempt) << 32) + b});
      auto resampled = detail::multinomial_draw(table, cumulative, n, rng);
      if (!resampled.has_positive_margins()) continue;
      return Draw{nstar_asy(resampled, fit_independence(resampled), alpha), attempt};
    }
    throw NumericError("bootstrap replicate kept producing empty margins");
  });
  if (batch.failures > 0) {
    throw NumericError("bootstrap replicate " + std::to_string(batch.first_failure) + ": " +
                       batch.first_failure_message);
  }
  NstarInterval out;
  out.level = level;
  out.replicates = replicates;
  std::vector<double> values;
  values.reserve(replicates);
  for (const auto& d : batch.values) {
    values.push_back(d.value);
    out.redraws += d.redraws;
  }
  if (out.redraws * 100 > replicates) {
    throw NumericError("bootstrap interval: " + std::to_string(out.redraws) +
                       " resamples had an empty margin (more than 1%)");
  }
  std::sort(values.begin(), values.end());
  out.lower = detail::sorted_quantile(values, 0.5 * (1.0 - level));
  out.upper = detail::sorted_quantile(values, 0.5 * (1.0 + level));
  out.median = detail::sorted_quantile(values, 0.5);
  return out;
}

}  // namespace credibility
