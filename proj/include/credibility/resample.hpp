#pragma once

// Power estimation by resampling: draw size-m subsamples (without
// replacement) or bootstrap samples (with replacement), apply a test, count
// rejections over independent replicate streams.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "credibility/error.hpp"
#include "credibility/goftests.hpp"
#include "credibility/parallel.hpp"
#include "credibility/statdist.hpp"

namespace credibility {

enum class ResampleScheme { Subsample, Bootstrap };

inline std::string to_string(ResampleScheme scheme) {
  return scheme == ResampleScheme::Subsample ? "subsample" : "bootstrap";
}

/// Estimated rejection probability at one sample size.
struct PowerPoint {
  std::size_t m = 0;
  std::size_t replicates = 0;  // replicates that produced a decision
  std::size_t rejections = 0;
  std::size_t errors = 0;      // replicates whose test raised an error
  double beta_hat = 0.0;
  double std_error = 0.0;

  static PowerPoint from_counts(std::size_t m, std::size_t replicates, std::size_t rejections,
                                std::size_t errors = 0) {
    detail::require(replicates >= 1, "PowerPoint needs at least one replicate");
    detail::require(rejections <= replicates, "PowerPoint: rejections exceed replicates");
    const double beta = static_cast<double>(rejections) / static_cast<double>(replicates);
    return {m, replicates, rejections, errors, beta,
            std::sqrt(beta * (1.0 - beta) / static_cast<double>(replicates))};
  }

  friend bool operator==(const PowerPoint&, const PowerPoint&) = default;
};

using PowerCurve = std::vector<PowerPoint>;

/// A replicate's test failed on too many resamples; carries the first
/// failing replicate index.
class ReplicateError : public Error {
 public:
  ReplicateError(std::size_t m, std::size_t replicate, std::size_t failures, const std::string& what)
      : Error("replicate " + std::to_string(replicate) + " at m=" + std::to_string(m) + " failed (" +
              std::to_string(failures) + " failures in total): " + what),
        m_(m),
        replicate_(replicate) {}

  std::size_t m() const { return m_; }
  std::size_t replicate() const { return replicate_; }

 private:
  std::size_t m_;
  std::size_t replicate_;
};

/// Stream of replicate b when estimating power at size m: every m owns a
/// disjoint block of 2^32 stream ids.
inline SeedSpec replicate_seed(SeedSpec base, std::size_t m, std::size_t b) {
  return {base.master_seed, base.stream_id + (static_cast<std::uint64_t>(m) << 32) + b};
}

// ---------------------------------------------------------------------------
// Index draws

namespace detail {

/// Identity permutation of [0, n) with overrides stored densely for small n
/// and in a hash map otherwise, so partial shuffles cost O(m).
class VirtualPermutation {
 public:
  VirtualPermutation(std::size_t n, std::size_t m) : dense_(n <= (1u << 16) || 4 * m >= n) {
    if (dense_) {
      values_.resize(n);
      for (std::size_t i = 0; i < n; ++i) values_[i] = i;
    } else {
      overrides_.reserve(2 * m);
    }
  }

  std::size_t get(std::size_t i) const {
    if (dense_) return values_[i];
    const auto it = overrides_.find(i);
    return it == overrides_.end() ? i : it->second;
  }

  void swap(std::size_t i, std::size_t j) {
    if (dense_) {
      std::swap(values_[i], values_[j]);
      return;
    }
    const std::size_t vi = get(i);
    const std::size_t vj = get(j);
    overrides_[i] = vj;
    overrides_[j] = vi;
  }

 private:
  bool dense_;
  std::vector<std::size_t> values_;
  std::unordered_map<std::size_t, std::size_t> overrides_;
};

}  // namespace detail

/// m distinct positions of [0, n) in selection order (partial Fisher-Yates).
/// The first k of a size-m draw equal a size-k draw on the same stream.
inline std::vector<std::size_t> subsample_indices(std::size_t n, std::size_t m, Rng& rng) {
  detail::require(m <= n, "subsample: m (" + std::to_string(m) + ") exceeds n (" + std::to_string(n) + ")");
  detail::VirtualPermutation perm(n, m);
  std::vector<std::size_t> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    perm.swap(i, j);
    out[i] = perm.get(i);
  }
  return out;
}

inline Sample draw_subsample(std::span<const double> data, std::size_t m, SeedSpec seed) {
  detail::require(m >= 1, "subsample: m must be >= 1");
  Rng rng(seed);
  const auto idx = subsample_indices(data.size(), m, rng);
  Sample out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = data[idx[i]];
  return out;
}

inline Sample draw_bootstrap(std::span<const double> data, std::size_t m, SeedSpec seed) {
  detail::require(!data.empty(), "bootstrap: data is empty");
  detail::require(m >= 1, "bootstrap: m must be >= 1");
  Rng rng(seed);
  Sample out(m);
  for (auto& value : out) value = data[rng.below(data.size())];
  return out;
}

// ---------------------------------------------------------------------------
// Sources of size-m samples

/// Resample an observed dataset (tau = empirical distribution).
struct DataSource {
  std::span<const double> data;
  ResampleScheme scheme = ResampleScheme::Subsample;
};

/// Draw directly from a named distribution (infinite-population mode).
struct PopulationSource {
  DistributionFamily truth;
};

using SampleSource = std::variant<DataSource, PopulationSource>;

inline Sample draw_from(const SampleSource& source, std::size_t m, Rng& rng) {
  if (const auto* pop = std::get_if<PopulationSource>(&source)) {
    Sample out(m);
    for (auto& value : out) value = draw(pop->truth, rng);
    return out;
  }
  const auto& ds = std::get<DataSource>(source);
  Sample out(m);
  if (ds.scheme == ResampleScheme::Subsample) {
    const auto idx = subsample_indices(ds.data.size(), m, rng);
    for (std::size_t i = 0; i < m; ++i) out[i] = ds.data[idx[i]];
  } else {
    for (auto& value : out) value = ds.data[rng.below(ds.data.size())];
  }
  return out;
}

/// Smallest sample size each test accepts.
inline std::size_t min_sample_size(const TestSpec& spec) {
  switch (spec.test) {
    case TestKind::PearsonChiSquareNormal: return 5 * static_cast<std::size_t>(spec.cells.value_or(4));
    case TestKind::MultinomialLrt: return 1;
    default: return 4;
  }
}

inline std::size_t max_sample_size(const TestSpec& spec) {
  return spec.test == TestKind::ShapiroWilk ? 5000 : static_cast<std::size_t>(-1);
}

namespace detail {

constexpr std::uint64_t kModelStreamBit = 1ULL << 63;

/// One replicate: draw a size-m sample from the source and run the test.
/// Two-sample tests compare against a fresh size-m draw from the model,
/// taken on a separate stream.
class PowerKernel {
 public:
  PowerKernel(SampleSource source, TestSpec spec) : source_(std::move(source)), spec_(std::move(spec)) {
    spec_.validate();
    detail::require(spec_.test != TestKind::MultinomialLrt,
                    "the multinomial LRT kernel operates on contingency tables");
    if (const auto* ds = std::get_if<DataSource>(&source_)) {
      detail::require(!ds->data.empty(), "power estimation: data is empty");
    }
    if (spec_.test == TestKind::KsTwoSample) {
      if (const auto* full = std::get_if<FullySpecified>(&spec_.null_spec)) {
        model_ = full->family;
      } else {
        const auto* ds = std::get_if<DataSource>(&source_);
        detail::require(ds != nullptr,
                        "two-sample test in population mode needs a fully specified model");
        detail::require(ds->data.size() >= 2, "two-sample test: need at least 2 observations to fit the model");
        const auto [mean, sd] = mean_sd(ds->data, 1);
        detail::require(sd > 0.0, "two-sample test: data variance is zero");
        model_ = Normal{mean, sd};
      }
    }
  }

  bool operator()(std::size_t m, SeedSpec stream) const {
    Rng rng(stream);
    Sample x = draw_from(source_, m, rng);
    std::sort(x.begin(), x.end());
    if (spec_.test == TestKind::KsTwoSample) {
      Rng model_rng(SeedSpec{stream.master_seed, stream.stream_id ^ kModelStreamBit});
      Sample y(m);
      for (auto& value : y) value = draw(model_, model_rng);
      std::sort(y.begin(), y.end());
      return ks_two_sample_sorted(x, y, spec_.alpha).reject;
    }
    return run_one_sample_sorted(spec_, x).reject;
  }

  void check_size(std::size_t m) const {
    detail::require(m >= min_sample_size(spec_) && m <= max_sample_size(spec_),
                    "sample size m=" + std::to_string(m) + " is outside the range accepted by test " +
                        to_string(spec_.test));
    if (const auto* ds = std::get_if<DataSource>(&source_)) {
      if (ds->scheme == ResampleScheme::Subsample) {
        detail::require(m <= ds->data.size(), "subsampling needs m <= n (m=" + std::to_string(m) +
                                                  ", n=" + std::to_string(ds->data.size()) + ")");
      }
    }
  }

 private:
  SampleSource source_;
  TestSpec spec_;
  DistributionFamily model_ = Normal{};
};

}  // namespace detail

/// Map-reduce over replicates of a boolean kernel. Failing replicates are
/// counted apart from rejections; more than 1% failures aborts the estimate.
template <typename Replicate>
PowerPoint estimate_power_with(std::size_t m, std::size_t replicates, SeedSpec seed,
                               const Execution& exec, Replicate&& replicate) {
  detail::require(replicates >= 1, "power estimation needs replicates >= 1");
  auto batch = run_replicates<char>(replicates, exec, [&](std::size_t b) -> char {
    return replicate(m, replicate_seed(seed, m, b)) ? 1 : 0;
  });
  if (batch.failures * 100 > replicates || batch.failures == replicates) {
    throw ReplicateError(m, batch.first_failure, batch.failures, batch.first_failure_message);
  }
  std::size_t rejections = 0;
  for (std::size_t b = 0; b < replicates; ++b) {
    if (!batch.failed[b] && batch.values[b]) ++rejections;
  }
  return PowerPoint::from_counts(m, replicates - batch.failures, rejections, batch.failures);
}

inline PowerPoint estimate_power(const SampleSource& source, const TestSpec& spec, std::size_t m,
                                 std::size_t replicates, SeedSpec seed, const Execution& exec = {}) {
  const detail::PowerKernel kernel(source, spec);
  kernel.check_size(m);
  return estimate_power_with(m, replicates, seed, exec, kernel);
}

inline PowerPoint estimate_power(std::span<const double> data, const TestSpec& spec, std::size_t m,
                                 std::size_t replicates, ResampleScheme scheme, SeedSpec seed,
                                 const Execution& exec = {}) {
  return estimate_power(DataSource{data, scheme}, spec, m, replicates, seed, exec);
}

inline PowerCurve power_curve(const SampleSource& source, const TestSpec& spec,
                              std::span<const std::size_t> m_grid, std::size_t replicates,
                              SeedSpec seed, const Execution& exec = {}) {
  detail::require(!m_grid.empty(), "power curve: m grid is empty");
  for (std::size_t i = 1; i < m_grid.size(); ++i) {
    detail::require(m_grid[i] > m_grid[i - 1], "power curve: m grid must be strictly increasing");
  }
  const detail::PowerKernel kernel(source, spec);
  for (std::size_t m : m_grid) kernel.check_size(m);
  PowerCurve curve;
  curve.reserve(m_grid.size());
  for (std::size_t m : m_grid) curve.push_back(estimate_power_with(m, replicates, seed, exec, kernel));
  return curve;
}

inline PowerCurve power_curve(std::span<const double> data, const TestSpec& spec,
                              std::span<const std::size_t> m_grid, std::size_t replicates,
                              ResampleScheme scheme, SeedSpec seed, const Execution& exec = {}) {
  return power_curve(DataSource{data, scheme}, spec, m_grid, replicates, seed, exec);
}

}  // namespace credibility
