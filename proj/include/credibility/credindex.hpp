#pragma once

// Search of an estimated power curve for the sample size N*_beta at which the
// test reaches power beta (N* = N*_0.5), plus reliability diagnostics.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include "credibility/error.hpp"
#include "credibility/resample.hpp"

namespace credibility {

struct SearchConfig {
  std::size_t replicates_coarse = 200;
  std::size_t replicates_fine = 1000;
  std::optional<std::size_t> m_cap;  // default: n for subsampling, 4n for bootstrap
  std::size_t initial_m = 16;
  std::size_t coarse_points = 3;
  std::size_t max_refinements = 10;
  std::size_t max_evaluations = 100;

  void validate() const {
    detail::require(replicates_coarse >= 1, "replicates_coarse must be >= 1");
    detail::require(replicates_fine >= replicates_coarse, "replicates_fine must be >= replicates_coarse");
    detail::require(initial_m >= 1, "initial_m must be >= 1");
    if (m_cap) detail::require(*m_cap >= 1, "m_cap must be >= 1");
  }
};

struct Bracket {
  std::size_t m_low = 0;
  std::size_t m_high = 0;

  friend bool operator==(const Bracket&, const Bracket&) = default;
};

struct CredibilityEstimate {
  std::optional<std::size_t> n_star;  // empty: power never reached the target (N* infinite)
  Bracket bracket;                    // both ends at m_cap when N* is infinite
  double target_beta = 0.5;
  double alpha = 0.05;
  std::string scheme;                 // "subsample", "bootstrap" or "population"
  PowerCurve curve;                   // every evaluation, in search order
  std::optional<std::size_t> data_size;
  std::optional<double> phi_inv;      // n / n_star (data mode, finite estimate)
  std::optional<double> eiss_lower_bound;
  std::size_t test_evaluations = 0;
  std::string diagnostic;

  bool finite() const { return n_star.has_value(); }
  double sqrt_n_star() const {
    return n_star ? std::sqrt(static_cast<double>(*n_star)) : std::numeric_limits<double>::infinity();
  }

  friend bool operator==(const CredibilityEstimate&, const CredibilityEstimate&) = default;
};

/// The search ran out of evaluations before bracketing the target.
class BudgetError : public SearchError {
 public:
  BudgetError(const std::string& what, PowerCurve partial)
      : SearchError(what), partial_(std::move(partial)) {}
  const PowerCurve& partial_curve() const { return partial_; }

 private:
  PowerCurve partial_;
};

/// Power at size m with the given replicate count.
using PowerOracle = std::function<PowerPoint(std::size_t m, std::size_t replicates)>;

struct SearchProblem {
  PowerOracle power;
  std::size_t m_min = 1;
  std::size_t m_cap = 1;
  double target_beta = 0.5;
  std::optional<std::size_t> start_hint;
};

namespace detail {

inline double logit(double p) { return std::log(p / (1.0 - p)); }

/// Wilson score interval at 95%.
inline std::pair<double, double> wilson_interval(const PowerPoint& p) {
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(p.replicates);
  const double centre = (p.beta_hat + z * z / (2.0 * n)) / (1.0 + z * z / n);
  const double half =
      z / (1.0 + z * z / n) * std::sqrt(p.beta_hat * (1.0 - p.beta_hat) / n + z * z / (4.0 * n * n));
  return {centre - half, centre + half};
}

/// Crossing of logit(beta) = logit(target), linear in sqrt(m) between two
/// bracketing points.
inline double interpolate_crossing(const PowerPoint& lo, const PowerPoint& hi, double target) {
  auto clamped_logit = [](const PowerPoint& p) {
    const double r = static_cast<double>(p.replicates);
    return logit(std::clamp(p.beta_hat, 0.5 / r, 1.0 - 0.5 / r));
  };
  const double x0 = std::sqrt(static_cast<double>(lo.m));
  const double x1 = std::sqrt(static_cast<double>(hi.m));
  const double y0 = clamped_logit(lo);
  const double y1 = clamped_logit(hi);
  double x = 0.5 * (x0 + x1);
  if (y1 > y0) x = x0 + (logit(target) - y0) * (x1 - x0) / (y1 - y0);
  x = std::clamp(x, x0, x1);
  return x * x;
}

class CrossingSearch {
 public:
  CrossingSearch(const SearchProblem& problem, const SearchConfig& config)
      : problem_(problem), config_(config) {}

  CredibilityEstimate run() {
    CredibilityEstimate out;
    out.target_beta = problem_.target_beta;
    if (!bracket()) {
      out.diagnostic = infinite_ ? "power at m_cap=" + std::to_string(problem_.m_cap) +
                                       " stays below the target; N* is infinite"
                                 : "power reaches the target already at the smallest admissible m=" +
                                       std::to_string(problem_.m_min);
      if (infinite_) {
        out.bracket = {problem_.m_cap, problem_.m_cap};
      } else {
        out.n_star = problem_.m_min;
        out.bracket = {problem_.m_min, problem_.m_min};
      }
      finish(out);
      return out;
    }
    coarse_grid();
    if (!restore_bracket()) {
      out.diagnostic = infinite_ ? "power at m_cap stays below the target at the fine replicate count; N* is infinite"
                                 : "power reaches the target at the smallest admissible m";
      if (infinite_) {
        out.bracket = {problem_.m_cap, problem_.m_cap};
      } else {
        out.n_star = problem_.m_min;
        out.bracket = {problem_.m_min, problem_.m_min};
      }
      finish(out);
      return out;
    }
    refine();
    const double crossing = interpolate_crossing(points_.at(lo_), points_.at(hi_), problem_.target_beta);
    out.n_star = std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(crossing)), lo_, hi_);
    out.bracket = {lo_, hi_};
    finish(out);
    return out;
  }

 private:
  bool above(std::size_t m) const { return points_.at(m).beta_hat >= problem_.target_beta; }

  const PowerPoint& evaluate(std::size_t m, std::size_t replicates) {
    if (curve_.size() >= config_.max_evaluations) {
      throw BudgetError("credibility search exhausted its budget of " +
                            std::to_string(config_.max_evaluations) + " evaluations",
                        curve_);
    }
    PowerPoint p = problem_.power(m, replicates);
    curve_.push_back(p);
    test_evaluations_ += p.replicates + p.errors;
    auto it = points_.find(m);
    if (it == points_.end() || it->second.replicates + it->second.errors <= replicates) {
      points_[m] = p;
    }
    return points_.at(m);
  }

  const PowerPoint& ensure_fine(std::size_t m) {
    const auto it = points_.find(m);
    if (it != points_.end() && it->second.replicates + it->second.errors >= config_.replicates_fine) {
      return it->second;
    }
    return evaluate(m, config_.replicates_fine);
  }

  // Geometric doubling (or halving) from the start value until the target is
  // bracketed. Returns false when the search degenerates at m_min or m_cap.
  bool bracket() {
    std::size_t m = std::clamp(problem_.start_hint.value_or(config_.initial_m), problem_.m_min,
                               problem_.m_cap);
    evaluate(m, config_.replicates_coarse);
    if (above(m)) {
      hi_ = m;
      while (true) {
        if (m == problem_.m_min) return false;
        m = std::max(problem_.m_min, m / 2);
        evaluate(m, config_.replicates_coarse);
        if (!above(m)) {
          lo_ = m;
          return true;
        }
        hi_ = m;
      }
    }
    lo_ = m;
    while (true) {
      if (m == problem_.m_cap) {
        ensure_fine(m);
        if (!above(m)) {
          infinite_ = true;
          return false;
        }
        hi_ = m;
        lo_ = largest_below(m).value_or(m);
        if (lo_ == m) {
          // Only m_cap itself was evaluated: walk down to find a lower end.
          std::size_t down = m;
          while (true) {
            if (down == problem_.m_min) return false;
            down = std::max(problem_.m_min, down / 2);
            evaluate(down, config_.replicates_coarse);
            if (!above(down)) break;
            hi_ = down;
          }
          lo_ = down;
        }
        return true;
      }
      m = std::min(problem_.m_cap, 2 * m);
      evaluate(m, config_.replicates_coarse);
      if (above(m)) {
        hi_ = m;
        return true;
      }
      lo_ = m;
    }
  }

  std::optional<std::size_t> largest_below(std::size_t m) const {
    std::optional<std::size_t> best;
    for (const auto& [k, p] : points_) {
      if (k < m && p.beta_hat < problem_.target_beta) best = k;
    }
    return best;
  }

  std::optional<std::size_t> smallest_above(std::size_t m) const {
    for (const auto& [k, p] : points_) {
      if (k > m && p.beta_hat >= problem_.target_beta) return k;
    }
    return std::nullopt;
  }

  void tighten() {
    for (const auto& [k, p] : points_) {
      if (k > lo_ && k < hi_ && p.beta_hat >= problem_.target_beta) {
        hi_ = k;
        break;
      }
    }
    for (const auto& [k, p] : points_) {
      if (k > lo_ && k < hi_ && p.beta_hat < problem_.target_beta) lo_ = k;
    }
  }

  // Interior points equally spaced in sqrt(m), at the coarse replicate count.
  void coarse_grid() {
    const double x0 = std::sqrt(static_cast<double>(lo_));
    const double x1 = std::sqrt(static_cast<double>(hi_));
    const auto k = static_cast<double>(config_.coarse_points);
    for (std::size_t i = 1; i <= config_.coarse_points; ++i) {
      const double x = x0 + (x1 - x0) * static_cast<double>(i) / (k + 1.0);
      const auto m = static_cast<std::size_t>(std::llround(x * x));
      if (m <= lo_ || m >= hi_ || points_.count(m)) continue;
      evaluate(m, config_.replicates_coarse);
    }
    tighten();
  }

  // Re-evaluates both ends at the fine replicate count and walks outward
  // until the bracket holds again at that count.
  bool restore_bracket() {
    while (true) {
      ensure_fine(lo_);
      if (above(lo_)) {
        hi_ = lo_;
        if (auto below = largest_below(hi_)) {
          lo_ = *below;
        } else {
          if (hi_ == problem_.m_min) return false;
          lo_ = std::max(problem_.m_min, hi_ / 2);
        }
        continue;
      }
      ensure_fine(hi_);
      if (!above(hi_)) {
        lo_ = hi_;
        if (auto upper = smallest_above(lo_)) {
          hi_ = *upper;
        } else {
          if (lo_ == problem_.m_cap) {
            infinite_ = true;
            return false;
          }
          hi_ = std::min(problem_.m_cap, 2 * lo_);
        }
        continue;
      }
      return true;
    }
  }

  void refine() {
    for (std::size_t iter = 0; iter < config_.max_refinements; ++iter) {
      const std::size_t width = hi_ - lo_;
      if (width <= 1) return;
      const std::size_t guard = std::max<std::size_t>(1, width / 10);
      double crossing = interpolate_crossing(points_.at(lo_), points_.at(hi_), problem_.target_beta);
      auto candidate = static_cast<std::size_t>(std::llround(crossing));
      candidate = std::clamp(candidate, lo_ + guard, hi_ - guard);
      if (candidate <= lo_ || candidate >= hi_) return;
      const PowerPoint& p = evaluate(candidate, config_.replicates_fine);
      const auto [ci_low, ci_high] = wilson_interval(p);
      if (p.beta_hat >= problem_.target_beta) {
        hi_ = candidate;
      } else {
        lo_ = candidate;
      }
      const double tolerance = std::max(2.0, 0.05 * static_cast<double>(candidate));
      if (ci_low <= problem_.target_beta && problem_.target_beta <= ci_high &&
          static_cast<double>(hi_ - lo_) <= tolerance) {
        return;
      }
    }
  }

  void finish(CredibilityEstimate& out) const {
    out.curve = curve_;
    out.test_evaluations = test_evaluations_;
  }

  const SearchProblem& problem_;
  const SearchConfig& config_;
  std::map<std::size_t, PowerPoint> points_;
  PowerCurve curve_;
  std::size_t test_evaluations_ = 0;
  std::size_t lo_ = 0;
  std::size_t hi_ = 0;
  bool infinite_ = false;
};

}  // namespace detail

/// Generic crossing search over any power oracle: bracket by doubling from
/// the start value, a coarse grid inside the bracket, then refinement at the
/// fine replicate count by logit-vs-sqrt(m) interpolation.
inline CredibilityEstimate search_power_crossing(const SearchProblem& problem, const SearchConfig& config) {
  config.validate();
  detail::require(problem.target_beta > 0.0 && problem.target_beta < 1.0, "target beta must lie in (0, 1)");
  detail::require(problem.m_min >= 1 && problem.m_min <= problem.m_cap, "search needs 1 <= m_min <= m_cap");
  return detail::CrossingSearch(problem, config).run();
}

namespace detail {

inline void attach_data_diagnostics(CredibilityEstimate& estimate, std::size_t n) {
  estimate.data_size = n;
  if (estimate.n_star) {
    estimate.phi_inv = static_cast<double>(n) / static_cast<double>(*estimate.n_star);
    estimate.eiss_lower_bound = estimate.phi_inv;
  }
}

}  // namespace detail

/// Default search cap: n under subsampling, 4n under the bootstrap, 2^17 in
/// population mode.
inline std::size_t default_m_cap(const SampleSource& source) {
  if (const auto* ds = std::get_if<DataSource>(&source)) {
    return ds->scheme == ResampleScheme::Subsample ? ds->data.size() : 4 * ds->data.size();
  }
  return std::size_t{1} << 17;
}

inline CredibilityEstimate nstar_beta(const SampleSource& source, const TestSpec& spec, SeedSpec seed,
                                      const SearchConfig& config, double target_beta,
                                      std::optional<std::size_t> start_hint = std::nullopt,
                                      const Execution& exec = {}) {
  config.validate();
  const detail::PowerKernel kernel(source, spec);
  const std::size_t m_cap = std::min(config.m_cap.value_or(default_m_cap(source)), max_sample_size(spec));
  const auto* ds = std::get_if<DataSource>(&source);
  if (ds && ds->scheme == ResampleScheme::Subsample) {
    detail::require(m_cap <= ds->data.size(), "m_cap must not exceed n under subsampling");
  }
  SearchProblem problem;
  problem.power = [&](std::size_t m, std::size_t replicates) {
    return estimate_power_with(m, replicates, seed, exec, kernel);
  };
  problem.m_min = min_sample_size(spec);
  problem.m_cap = m_cap;
  problem.target_beta = target_beta;
  problem.start_hint = start_hint;
  detail::require(problem.m_min <= problem.m_cap,
                  "data too small for test " + to_string(spec.test) + " (needs m >= " +
                      std::to_string(problem.m_min) + ")");
  auto estimate = search_power_crossing(problem, config);
  estimate.alpha = spec.alpha;
  estimate.scheme = ds ? to_string(ds->scheme) : "population";
  if (ds) detail::attach_data_diagnostics(estimate, ds->data.size());
  return estimate;
}

inline CredibilityEstimate find_nstar(const SampleSource& source, const TestSpec& spec, SeedSpec seed,
                                      const SearchConfig& config,
                                      std::optional<std::size_t> start_hint = std::nullopt,
                                      const Execution& exec = {}) {
  return nstar_beta(source, spec, seed, config, 0.5, start_hint, exec);
}

inline CredibilityEstimate find_nstar(std::span<const double> data, const TestSpec& spec,
                                      ResampleScheme scheme, SeedSpec seed, const SearchConfig& config,
                                      std::optional<std::size_t> start_hint = std::nullopt,
                                      const Execution& exec = {}) {
  return find_nstar(DataSource{data, scheme}, spec, seed, config, start_hint, exec);
}

inline CredibilityEstimate nstar_beta(std::span<const double> data, const TestSpec& spec,
                                      ResampleScheme scheme, SeedSpec seed, const SearchConfig& config,
                                      double target_beta, const Execution& exec = {}) {
  return nstar_beta(DataSource{data, scheme}, spec, seed, config, target_beta, std::nullopt, exec);
}

struct ReliabilityDiagnostic {
  double phi_inv = 0.0;           // n / N*
  double eiss_lower_bound = 0.0;  // EISS >= n / m
  bool low_reliability = false;   // phi_inv <= 10
};

inline ReliabilityDiagnostic reliability(std::size_t n, const CredibilityEstimate& estimate) {
  if (!estimate.finite()) throw InputError("reliability: the estimate is infinite");
  detail::require(n >= 1, "reliability: n must be positive");
  const double phi_inv = static_cast<double>(n) / static_cast<double>(*estimate.n_star);
  return {phi_inv, phi_inv, phi_inv <= 10.0};
}

}  // namespace credibility
