#pragma once

// Goodness-of-fit tests. Each maps a sample (or two) to a statistic and a
// size-alpha decision; reject <=> statistic > critical_value.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "credibility/detail/lilliefors_table.hpp"
#include "credibility/error.hpp"
#include "credibility/statdist.hpp"

namespace credibility {

enum class TestKind { KsOneSample, KsTwoSample, ShapiroWilk, PearsonChiSquareNormal, MultinomialLrt };

/// Null hypothesis is a single, fully specified distribution.
struct FullySpecified {
  DistributionFamily family;
};

/// Null hypothesis is the normal family; mean and sd come from the sample.
struct EstimatedNormal {};

using NullSpec = std::variant<EstimatedNormal, FullySpecified>;

struct TestSpec {
  TestKind test = TestKind::KsOneSample;
  double alpha = 0.05;
  NullSpec null_spec = EstimatedNormal{};
  std::optional<int> cells;  // Pearson only; default depends on n

  void validate() const {
    detail::require(alpha > 0.0 && alpha < 0.5, "test size alpha must lie in (0, 0.5)");
    if (cells) {
      detail::require(*cells >= 4, "Pearson test needs at least 4 cells");
    }
    if (const auto* full = std::get_if<FullySpecified>(&null_spec)) {
      credibility::validate(full->family);
    }
  }
};

struct TestResult {
  double statistic = 0.0;
  double critical_value = 0.0;
  bool reject = false;
  std::optional<int> df;
  std::optional<double> p_value;
};

inline std::string to_string(TestKind kind) {
  switch (kind) {
    case TestKind::KsOneSample: return "ks1";
    case TestKind::KsTwoSample: return "ks2";
    case TestKind::ShapiroWilk: return "shapiro-wilk";
    case TestKind::PearsonChiSquareNormal: return "pearson";
    case TestKind::MultinomialLrt: return "lrt";
  }
  return "unknown";
}

namespace detail {

inline TestResult decide(double statistic, double critical, std::optional<int> df = std::nullopt,
                         std::optional<double> p_value = std::nullopt) {
  return TestResult{statistic, critical, statistic > critical, df, p_value};
}

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

/// Mean and standard deviation with divisor n - ddof.
inline MeanSd mean_sd(std::span<const double> values, int ddof) {
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - ddof))};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Kolmogorov distribution

/// P(K > x) for the limiting Kolmogorov distribution.
inline double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 1.0) {
    // Small-x form of the CDF converges faster here.
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double sum = 0.0;
    for (int k = 1; k <= 50; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double term = std::exp(-odd * odd * pi2 / (8.0 * x * x));
      sum += term;
      if (term < 1e-18) break;
    }
    return 1.0 - std::sqrt(2.0 * std::numbers::pi) / x * sum;
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

/// x with P(K > x) = alpha.
inline double kolmogorov_upper_quantile(double alpha) {
  detail::require(alpha > 0.0 && alpha < 1.0, "kolmogorov quantile: alpha must lie in (0,1)");
  double lo = 0.2;
  double hi = 4.0;
  for (int iter = 0; iter < 80; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (kolmogorov_survival(mid) > alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Upper-alpha critical value of D for the KS test against a normal whose
/// mean and sd are estimated from the same n observations. Interpolates the
/// Monte Carlo table linearly in log(alpha) and in 1/sqrt(n); sqrt(n)*D is
/// held constant beyond the largest tabulated n.
inline double lilliefors_critical_value(std::size_t n, double alpha) {
  using namespace detail::lilliefors;
  detail::require(n >= kSizes.front(), "Lilliefors critical value needs n >= 4");
  detail::require(alpha >= kAlphas.front() && alpha <= kAlphas.back(),
                  "alpha outside the tabulated Lilliefors range [0.001, 0.5]");

  auto alpha_index = static_cast<std::size_t>(
      std::upper_bound(kAlphas.begin(), kAlphas.end(), alpha) - kAlphas.begin());
  alpha_index = std::clamp<std::size_t>(alpha_index, 1, kAlphas.size() - 1);
  const double la0 = std::log(kAlphas[alpha_index - 1]);
  const double la1 = std::log(kAlphas[alpha_index]);
  const double ta = (std::log(alpha) - la0) / (la1 - la0);

  auto at_row = [&](std::size_t row) {
    const double q0 = kScaledQuantiles[row][alpha_index - 1];
    const double q1 = kScaledQuantiles[row][alpha_index];
    return q0 + ta * (q1 - q0);
  };

  const double root_n = std::sqrt(static_cast<double>(n));
  if (n >= kSizes.back()) return at_row(kSizes.size() - 1) / root_n;

  const auto upper = static_cast<std::size_t>(
      std::lower_bound(kSizes.begin(), kSizes.end(), n) - kSizes.begin());
  if (kSizes[upper] == n) return at_row(upper) / root_n;
  const double x0 = 1.0 / std::sqrt(static_cast<double>(kSizes[upper - 1]));
  const double x1 = 1.0 / std::sqrt(static_cast<double>(kSizes[upper]));
  const double tn = (1.0 / root_n - x0) / (x1 - x0);
  const double scaled = at_row(upper - 1) + tn * (at_row(upper) - at_row(upper - 1));
  return scaled / root_n;
}

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov

/// sup_x |ECDF(x) - F(x)| for a sorted sample and a continuous CDF. Tied
/// values are handled by the i/n and (i-1)/n sides at each order statistic.
template <typename Cdf>
double ks_statistic_sorted(std::span<const double> sorted, Cdf&& cdf_fn) {
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf_fn(sorted[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

/// sup_x |ECDF_a(x) - ECDF_b(x)| for two sorted samples; ties step together.
inline double ks_two_sample_statistic_sorted(std::span<const double> a, std::span<const double> b) {
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

namespace detail {

inline TestResult ks_one_sample_sorted(std::span<const double> sorted, const TestSpec& spec) {
  const std::size_t n = sorted.size();
  require(n >= 4, "KS test needs at least 4 observations");
  if (std::holds_alternative<EstimatedNormal>(spec.null_spec)) {
    const auto [mean, sd] = mean_sd(sorted, 1);
    if (!(sd > 0.0)) throw InputError("KS test against a fitted normal: sample variance is zero");
    const double d =
        ks_statistic_sorted(sorted, [&](double x) { return normal_cdf((x - mean) / sd); });
    return decide(d, lilliefors_critical_value(n, spec.alpha));
  }
  const auto& family = std::get<FullySpecified>(spec.null_spec).family;
  const double d = ks_statistic_sorted(sorted, [&](double x) { return cdf(family, x); });
  const double critical = kolmogorov_upper_quantile(spec.alpha) / std::sqrt(static_cast<double>(n));
  return decide(d, critical);
}

inline TestResult ks_two_sample_sorted(std::span<const double> a, std::span<const double> b,
                                       double alpha) {
  require(!a.empty() && !b.empty(), "two-sample KS test: empty sample");
  require(a.size() >= 4 && b.size() >= 4, "two-sample KS test needs at least 4 observations per sample");
  require(alpha > 0.0 && alpha < 0.5, "test size alpha must lie in (0, 0.5)");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double d = ks_two_sample_statistic_sorted(a, b);
  const double critical = kolmogorov_upper_quantile(alpha) * std::sqrt((na + nb) / (na * nb));
  return decide(d, critical);
}

inline std::vector<double> sorted_copy(std::span<const double> values) {
  std::vector<double> out(values.begin(), values.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

inline TestResult ks_one_sample(std::span<const double> sample, const TestSpec& spec) {
  spec.validate();
  detail::require(spec.test == TestKind::KsOneSample, "ks_one_sample: spec.test must be KsOneSample");
  const auto sorted = detail::sorted_copy(sample);
  return detail::ks_one_sample_sorted(sorted, spec);
}

inline TestResult ks_two_sample(std::span<const double> sample_a, std::span<const double> sample_b,
                                double alpha) {
  const auto a = detail::sorted_copy(sample_a);
  const auto b = detail::sorted_copy(sample_b);
  return detail::ks_two_sample_sorted(a, b, alpha);
}

// ---------------------------------------------------------------------------
// Shapiro-Wilk (Royston 1992 approximation)

struct ShapiroWilkOutcome {
  double w = 0.0;
  double p_value = 1.0;
  double w_critical = 0.0;  // W below this rejects at the requested alpha
};

namespace detail {

inline double poly(std::span<const double> coefficients, double x) {
  double result = coefficients.back();
  for (std::size_t i = coefficients.size() - 1; i-- > 0;) result = result * x + coefficients[i];
  return result;
}

/// Upper-half coefficients a_1..a_{n/2}; sum of squares of the full
/// antisymmetric vector is 1.
inline std::vector<double> shapiro_wilk_coefficients(std::size_t n) {
  static constexpr double c1[] = {0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
  static constexpr double c2[] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
  const std::size_t half = n / 2;
  const double an = static_cast<double>(n);
  std::vector<double> a(half);
  double summ2 = 0.0;
  for (std::size_t i = 1; i <= half; ++i) {
    a[i - 1] = normal_quantile((static_cast<double>(i) - 0.375) / (an + 0.25));
    summ2 += a[i - 1] * a[i - 1];
  }
  summ2 *= 2.0;
  const double ssumm2 = std::sqrt(summ2);
  const double rsn = 1.0 / std::sqrt(an);
  const double a1 = poly(c1, rsn) - a[0] / ssumm2;
  std::size_t first_scaled = 0;
  double fac = 0.0;
  if (n > 5) {
    first_scaled = 3;
    const double a2 = -a[1] / ssumm2 + poly(c2, rsn);
    fac = std::sqrt((summ2 - 2.0 * a[0] * a[0] - 2.0 * a[1] * a[1]) /
                    (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
    a[1] = a2;
  } else {
    first_scaled = 2;
    fac = std::sqrt((summ2 - 2.0 * a[0] * a[0]) / (1.0 - 2.0 * a1 * a1));
  }
  a[0] = a1;
  for (std::size_t i = first_scaled; i <= half; ++i) a[i - 1] = -a[i - 1] / fac;
  return a;
}

struct RoystonTransform {
  double mu = 0.0;
  double sigma = 1.0;
  double gamma = 0.0;  // used for n <= 11 only
  bool small = false;
};

inline RoystonTransform royston_transform(std::size_t n) {
  static constexpr double g[] = {-2.273, 0.459};
  static constexpr double c3[] = {0.544, -0.39978, 0.025054, -6.714e-4};
  static constexpr double c4[] = {1.3822, -0.77857, 0.062767, -0.0020322};
  static constexpr double c5[] = {-1.5861, -0.31082, -0.083751, 0.0038915};
  static constexpr double c6[] = {-0.4803, -0.082676, 0.0030302};
  const double an = static_cast<double>(n);
  if (n <= 11) {
    return {poly(c3, an), std::exp(poly(c4, an)), poly(g, an), true};
  }
  const double log_n = std::log(an);
  return {poly(c5, log_n), std::exp(poly(c6, log_n)), 0.0, false};
}

inline ShapiroWilkOutcome shapiro_wilk_sorted(std::span<const double> sorted, double alpha) {
  const std::size_t n = sorted.size();
  require(n >= 4 && n <= 5000, "Shapiro-Wilk test needs 4 <= n <= 5000");
  require(alpha > 0.0 && alpha < 0.5, "test size alpha must lie in (0, 0.5)");
  if (sorted.front() == sorted.back()) throw InputError("Shapiro-Wilk test: all values identical");

  const auto a = shapiro_wilk_coefficients(n);
  const auto [mean, sd] = mean_sd(sorted, 0);
  (void)sd;
  double ss = 0.0;
  for (double x : sorted) ss += (x - mean) * (x - mean);
  double numerator = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) numerator += a[i] * (sorted[n - 1 - i] - sorted[i]);
  const double w = std::min(1.0, numerator * numerator / ss);

  const auto t = royston_transform(n);
  double p = 1.0;
  if (w < 1.0) {
    double y = std::log(1.0 - w);
    if (t.small) {
      if (y >= t.gamma) {
        p = 1e-99;
      } else {
        y = -std::log(t.gamma - y);
        p = normal_cdf(-(y - t.mu) / t.sigma);
      }
    } else {
      p = normal_cdf(-(y - t.mu) / t.sigma);
    }
  }
  const double y_critical = t.mu + t.sigma * normal_quantile(1.0 - alpha);
  const double log_one_minus_w = t.small ? t.gamma - std::exp(-y_critical) : y_critical;
  return {w, p, 1.0 - std::exp(log_one_minus_w)};
}

}  // namespace detail

inline ShapiroWilkOutcome shapiro_wilk_w(std::span<const double> sample, double alpha = 0.05) {
  const auto sorted = detail::sorted_copy(sample);
  return detail::shapiro_wilk_sorted(sorted, alpha);
}

/// statistic = 1 - W, critical_value = 1 - W_critical; rejects iff p < alpha.
inline TestResult shapiro_wilk(std::span<const double> sample, double alpha) {
  const auto outcome = shapiro_wilk_w(sample, alpha);
  return detail::decide(1.0 - outcome.w, 1.0 - outcome.w_critical, std::nullopt, outcome.p_value);
}

// ---------------------------------------------------------------------------
// Pearson chi-square against a fitted normal

/// ceil(2 n^(2/5)), reduced so that every cell expects at least 5.
inline int default_pearson_cells(std::size_t n) {
  const int rule = static_cast<int>(std::ceil(2.0 * std::pow(static_cast<double>(n), 0.4)));
  return std::max(4, std::min(rule, static_cast<int>(n / 5)));
}

inline double pearson_statistic(std::span<const double> observed, std::span<const double> expected) {
  detail::require(observed.size() == expected.size(), "pearson_statistic: size mismatch");
  double statistic = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    detail::require(expected[i] > 0.0, "pearson_statistic: expected counts must be positive");
    const double diff = observed[i] - expected[i];
    statistic += diff * diff / expected[i];
  }
  return statistic;
}

/// Equiprobable cells under the normal fitted by maximum likelihood;
/// df = cells - 3.
inline TestResult pearson_chisq_normal(std::span<const double> sample, const TestSpec& spec) {
  spec.validate();
  const std::size_t n = sample.size();
  const int cells = spec.cells.value_or(default_pearson_cells(n));
  detail::require(cells >= 4, "Pearson test needs at least 4 cells");
  detail::require(n >= 5 * static_cast<std::size_t>(cells),
                  "Pearson test needs n >= 5 * cells (n = " + std::to_string(n) +
                      ", cells = " + std::to_string(cells) + ")");
  const auto [mean, sd] = detail::mean_sd(sample, 0);
  if (!(sd > 0.0)) throw InputError("Pearson test: sample variance is zero");
  const double expected_count = static_cast<double>(n) / cells;
  if (expected_count < 1.0) throw InputError("Pearson test: expected count below 1");

  std::vector<double> boundaries(static_cast<std::size_t>(cells - 1));
  for (int k = 1; k < cells; ++k) {
    boundaries[static_cast<std::size_t>(k - 1)] =
        mean + sd * normal_quantile(static_cast<double>(k) / cells);
  }
  std::vector<double> observed(static_cast<std::size_t>(cells), 0.0);
  for (double x : sample) {
    const auto cell = std::upper_bound(boundaries.begin(), boundaries.end(), x) - boundaries.begin();
    observed[static_cast<std::size_t>(cell)] += 1.0;
  }
  const std::vector<double> expected(static_cast<std::size_t>(cells), expected_count);
  const double statistic = pearson_statistic(observed, expected);
  const int df = cells - 3;
  const double critical = quantile(ChiSquare{df}, 1.0 - spec.alpha);
  return detail::decide(statistic, critical, df, survival(ChiSquare{df}, statistic));
}

// ---------------------------------------------------------------------------
// Dispatch

namespace detail {

/// One-sample test on an already sorted sample.
inline TestResult run_one_sample_sorted(const TestSpec& spec, std::span<const double> sorted) {
  switch (spec.test) {
    case TestKind::KsOneSample: return ks_one_sample_sorted(sorted, spec);
    case TestKind::ShapiroWilk: {
      const auto outcome = shapiro_wilk_sorted(sorted, spec.alpha);
      return decide(1.0 - outcome.w, 1.0 - outcome.w_critical, std::nullopt, outcome.p_value);
    }
    case TestKind::PearsonChiSquareNormal: return pearson_chisq_normal(sorted, spec);
    case TestKind::KsTwoSample:
    case TestKind::MultinomialLrt: break;
  }
  throw InputError("test " + to_string(spec.test) + " is not a one-sample test");
}

}  // namespace detail

inline bool is_one_sample(TestKind kind) {
  return kind == TestKind::KsOneSample || kind == TestKind::ShapiroWilk ||
         kind == TestKind::PearsonChiSquareNormal;
}

inline TestResult run_one_sample(const TestSpec& spec, std::span<const double> sample) {
  spec.validate();
  const auto sorted = detail::sorted_copy(sample);
  return detail::run_one_sample_sorted(spec, sorted);
}

}  // namespace credibility
