#pragma once

// Distribution families, special functions, samplers and the seeded
// random-stream contract shared by every other module.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "credibility/error.hpp"

namespace credibility {

using Sample = std::vector<double>;

struct Normal {
  double location = 0.0;
  double scale = 1.0;
};

/// CDF 1/(1+exp(-(x-location)/scale)); variance scale^2 * pi^2 / 3.
struct Logistic {
  double location = 0.0;
  double scale = 1.0;
};

struct ChiSquare {
  int df = 1;
};

struct NoncentralChiSquare {
  int df = 1;
  double noncentrality = 0.0;
};

using DistributionFamily = std::variant<Normal, Logistic, ChiSquare, NoncentralChiSquare>;

// ---------------------------------------------------------------------------
// Random streams

/// Identifies one random stream. Replicate b of a job uses its own stream_id,
/// so results never depend on evaluation order or thread count.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t mix64(std::uint64_t value) {
  std::uint64_t state = value;
  return splitmix64(state);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace detail

/// Derives an independent seed from a parent seed and a tag, for jobs that
/// nest several seeded stages (e.g. one power estimate per simulated dataset).
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t tag) {
  return detail::mix64(detail::mix64(master_seed) ^ detail::mix64(tag + 0x632BE59BD9B4E019ULL));
}

/// xoshiro256** keyed by a SeedSpec.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(SeedSpec seed) {
    std::uint64_t state = detail::mix64(seed.master_seed) ^
                          detail::mix64(seed.stream_id ^ 0xD1B54A32D192ED03ULL);
    for (auto& word : state_) word = detail::splitmix64(state);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = detail::rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = detail::rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1).
  double uniform_open() {
    return (static_cast<double>((*this)() >> 12) + 0.5) * 0x1.0p-52;
  }

  /// Uniform integer in [0, bound), Lemire's nearly divisionless method.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw InputError("Rng::below: bound must be positive");
    __uint128_t product = static_cast<__uint128_t>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        product = static_cast<__uint128_t>((*this)()) * bound;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

  /// Standard normal, Marsaglia polar method.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
  }

  /// Central chi-square with integer df, as a sum of squared normals.
  double chi_square(int df) {
    double total = 0.0;
    for (int i = 0; i < df; ++i) {
      const double z = normal();
      total += z * z;
    }
    return total;
  }

 private:
  std::array<std::uint64_t, 4> state_{};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// ---------------------------------------------------------------------------
// Families

inline void validate(const DistributionFamily& family) {
  std::visit(
      [](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Normal> || std::is_same_v<T, Logistic>) {
          detail::require(std::isfinite(f.location), "distribution location must be finite");
          detail::require(std::isfinite(f.scale) && f.scale > 0.0,
                          "distribution scale must be positive");
        } else if constexpr (std::is_same_v<T, ChiSquare>) {
          detail::require(f.df >= 1, "chi-square df must be >= 1");
        } else {
          detail::require(f.df >= 1, "noncentral chi-square df must be >= 1");
          detail::require(std::isfinite(f.noncentrality) && f.noncentrality >= 0.0,
                          "noncentrality must be finite and >= 0");
        }
      },
      family);
}

inline std::string describe(const DistributionFamily& family) {
  return std::visit(
      [](const auto& f) -> std::string {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Normal>) {
          return "normal(" + std::to_string(f.location) + "," + std::to_string(f.scale) + ")";
        } else if constexpr (std::is_same_v<T, Logistic>) {
          return "logistic(" + std::to_string(f.location) + "," + std::to_string(f.scale) + ")";
        } else if constexpr (std::is_same_v<T, ChiSquare>) {
          return "chisq(" + std::to_string(f.df) + ")";
        } else {
          return "ncchisq(" + std::to_string(f.df) + "," + std::to_string(f.noncentrality) + ")";
        }
      },
      family);
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

inline double normal_quantile(double p) {
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

namespace detail {

struct TailPair {
  double lower = 0.0;
  double upper = 0.0;
};

// Poisson(lambda/2) mixture of central chi-square tails, summed outward from
// the Poisson mode with the recurrences
//   P(a+1, x) = P(a, x) - t(a),  Q(a+1, x) = Q(a, x) + t(a),
//   t(a) = x^a e^-x / Gamma(a+1).
// Summation stops once the bound on the untouched Poisson mass is < 1e-15.
inline TailPair noncentral_chi_square_tails(int df, double lambda, double x) {
  if (x <= 0.0) return {0.0, 1.0};
  if (std::isinf(x)) return {1.0, 0.0};
  const double half_x = 0.5 * x;
  const double a0 = 0.5 * df;
  if (lambda == 0.0) {
    return {boost::math::gamma_p(a0, half_x), boost::math::gamma_q(a0, half_x)};
  }
  const double k = 0.5 * lambda;
  const double log_x = std::log(half_x);
  const auto mode = static_cast<long>(std::floor(k));
  auto term = [&](double a) { return std::exp(a * log_x - half_x - std::lgamma(a + 1.0)); };

  const double w_mode = std::exp(-k + mode * std::log(k) - std::lgamma(mode + 1.0));
  const double p_mode = boost::math::gamma_p(a0 + mode, half_x);
  const double q_mode = boost::math::gamma_q(a0 + mode, half_x);
  constexpr double kTail = 1e-15;

  double lower = w_mode * p_mode;
  double upper = w_mode * q_mode;

  {
    double w = w_mode;
    double p = p_mode;
    double q = q_mode;
    double t = term(a0 + mode);
    for (long j = mode + 1;; ++j) {
      p = std::max(0.0, p - t);
      q = std::min(1.0, q + t);
      t *= half_x / (a0 + j);
      w *= k / static_cast<double>(j);
      lower += w * p;
      upper += w * q;
      const double ratio = k / static_cast<double>(j + 1);
      if (ratio < 1.0 && w * ratio / (1.0 - ratio) < kTail) break;
      if (j > mode + 100000) throw NumericError("noncentral chi-square series did not converge");
    }
  }
  {
    double w = w_mode;
    double p = p_mode;
    double q = q_mode;
    for (long j = mode - 1; j >= 0; --j) {
      const double t = term(a0 + j);
      p = std::min(1.0, p + t);
      q = std::max(0.0, q - t);
      w *= static_cast<double>(j + 1) / k;
      lower += w * p;
      upper += w * q;
      const double ratio = static_cast<double>(j) / k;
      if (w * ratio / (1.0 - ratio) < kTail) break;
    }
  }
  return {std::clamp(lower, 0.0, 1.0), std::clamp(upper, 0.0, 1.0)};
}

inline double logistic_cdf(double z) {
  return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

}  // namespace detail

inline double cdf(const DistributionFamily& family, double x) {
  validate(family);
  if (std::isnan(x)) throw InputError("cdf: x is NaN");
  return std::visit(
      [x](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Normal>) {
          return normal_cdf((x - f.location) / f.scale);
        } else if constexpr (std::is_same_v<T, Logistic>) {
          return detail::logistic_cdf((x - f.location) / f.scale);
        } else if constexpr (std::is_same_v<T, ChiSquare>) {
          if (x <= 0.0) return 0.0;
          if (std::isinf(x)) return 1.0;
          return boost::math::gamma_p(0.5 * f.df, 0.5 * x);
        } else {
          return detail::noncentral_chi_square_tails(f.df, f.noncentrality, x).lower;
        }
      },
      family);
}

/// 1 - cdf, evaluated without cancellation.
inline double survival(const DistributionFamily& family, double x) {
  validate(family);
  if (std::isnan(x)) throw InputError("survival: x is NaN");
  return std::visit(
      [x](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Normal>) {
          return normal_cdf(-(x - f.location) / f.scale);
        } else if constexpr (std::is_same_v<T, Logistic>) {
          return detail::logistic_cdf(-(x - f.location) / f.scale);
        } else if constexpr (std::is_same_v<T, ChiSquare>) {
          if (x <= 0.0) return 1.0;
          if (std::isinf(x)) return 0.0;
          return boost::math::gamma_q(0.5 * f.df, 0.5 * x);
        } else {
          return detail::noncentral_chi_square_tails(f.df, f.noncentrality, x).upper;
        }
      },
      family);
}

inline double quantile(const DistributionFamily& family, double p) {
  validate(family);
  detail::require(p >= 0.0 && p < 1.0, "quantile: p must lie in [0, 1)");
  return std::visit(
      [p, &family](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Normal>) {
          detail::require(p > 0.0, "quantile: p must be > 0 for the normal family");
          return f.location + f.scale * normal_quantile(p);
        } else if constexpr (std::is_same_v<T, Logistic>) {
          detail::require(p > 0.0, "quantile: p must be > 0 for the logistic family");
          return f.location + f.scale * std::log(p / (1.0 - p));
        } else if constexpr (std::is_same_v<T, ChiSquare>) {
          if (p == 0.0) return 0.0;
          return 2.0 * boost::math::gamma_p_inv(0.5 * f.df, p);
        } else {
          if (p == 0.0) return 0.0;
          double hi = f.df + f.noncentrality +
                      10.0 * std::sqrt(2.0 * (f.df + 2.0 * f.noncentrality)) + 10.0;
          while (cdf(family, hi) < p) hi *= 2.0;
          double lo = 0.0;
          for (int iter = 0; iter < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++iter) {
            const double mid = 0.5 * (lo + hi);
            (cdf(family, mid) < p ? lo : hi) = mid;
          }
          return 0.5 * (lo + hi);
        }
      },
      family);
}

/// Draws one value from `family` using `rng`.
inline double draw(const DistributionFamily& family, Rng& rng) {
  return std::visit(
      [&rng](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Normal>) {
          return f.location + f.scale * rng.normal();
        } else if constexpr (std::is_same_v<T, Logistic>) {
          const double u = rng.uniform_open();
          return f.location + f.scale * std::log(u / (1.0 - u));
        } else if constexpr (std::is_same_v<T, ChiSquare>) {
          return rng.chi_square(f.df);
        } else {
          const double shifted = rng.normal() + std::sqrt(f.noncentrality);
          return shifted * shifted + rng.chi_square(f.df - 1);
        }
      },
      family);
}

/// `count` values from `family` on the stream named by `seed`. A size-m draw
/// is a prefix of any larger draw on the same stream.
inline Sample sample(const DistributionFamily& family, std::size_t count, SeedSpec seed) {
  validate(family);
  detail::require(count >= 1, "sample: count must be >= 1");
  Rng rng(seed);
  Sample out(count);
  for (auto& value : out) value = draw(family, rng);
  return out;
}

// ---------------------------------------------------------------------------
// Combinatorics

inline double log_choose(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n || n < 0) return -std::numeric_limits<double>::infinity();
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

/// Probability that two independent size-m subsets of {1..n} share exactly k
/// indices (hypergeometric).
inline double overlap_pmf(std::int64_t n, std::int64_t m, std::int64_t k) {
  detail::require(n >= 1 && m >= 1, "overlap_pmf: n and m must be positive");
  detail::require(m <= n, "overlap_pmf: m must not exceed n");
  if (k < std::max<std::int64_t>(0, 2 * m - n) || k > m) return 0.0;
  return std::exp(log_choose(m, k) + log_choose(n - m, m - k) - log_choose(n, m));
}

}  // namespace credibility
