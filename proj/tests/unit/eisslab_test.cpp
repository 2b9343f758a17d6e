#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "credibility/eisslab.hpp"
#include "discrete_kernel.hpp"
#include "oracles.hpp"

using namespace credibility;

TEST(UcompVariance, EdgeCases) {
  const std::vector<double> one{0.7};
  EXPECT_NEAR(ucomp_variance_exact(one, 40, 1), 0.7 / 40, 1e-15);
  const std::vector<double> s{0.1, 0.3, 0.4, 0.9};
  EXPECT_NEAR(ucomp_variance_exact(s, 4, 4), 0.9, 1e-13);
  EXPECT_THROW(ucomp_variance_exact(s, 3, 4), InputError);
  EXPECT_THROW(ucomp_variance_exact(one, 10, 2), InputError);
}

TEST(UcompVariance, MatchesEnumeratedOverlap) {
  const std::vector<double> s{0.02, 0.05, 0.09};
  double expected = 0.0;
  for (int k = 1; k <= 3; ++k) expected += oracle::overlap_probability(9, 3, k) * s[k - 1];
  EXPECT_NEAR(ucomp_variance_exact(s, 9, 3), expected, 1e-12);
}

TEST(UcompVariance, LargeSampleLimit) {
  Rng rng(SeedSpec{60, 0});
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 2 + static_cast<int>(rng.below(8));
    std::vector<double> s(m);
    s[0] = 0.5 + 0.5 * rng.uniform();
    for (int i = 1; i < m; ++i) s[i] = s[i - 1] + rng.uniform() * s[0];
    const std::int64_t n = 100LL * m * m;
    const double gap = std::abs(n * ucomp_variance_exact(s, n, m) / (m * m * s[0]) - 1.0);
    EXPECT_LT(gap, 0.05) << m;
  }
}

TEST(SmallOracle, ConstantAndEnumeratedKernels) {
  const std::vector<double> data{0.3, -1.2, 0.8, 2.0, -0.4, -0.9};
  EXPECT_EQ(ucomp_small_oracle(data, 3, [](std::span<const double>) { return 1.0; }), 1.0);
  auto mean_positive = [](std::span<const double> s) {
    double t = 0.0;
    for (double x : s) t += x;
    return t > 0.0 ? 1.0 : 0.0;
  };
  double hits = 0.0;
  const auto all = oracle::subsets(6, 3);
  for (auto mask : all) {
    double t = 0.0;
    for (int i = 0; i < 6; ++i)
      if (mask & (1u << i)) t += data[i];
    if (t > 0.0) hits += 1.0;
  }
  EXPECT_NEAR(ucomp_small_oracle(data, 3, mean_positive), hits / all.size(), 1e-15);
  const std::vector<double> wide(40, 1.0);
  EXPECT_THROW(ucomp_small_oracle(wide, 20, mean_positive), InputError);
}

TEST(SmallOracle, SubsamplingEstimateConverges) {
  // Uniform subsampling is an unbiased draw from the complete U-statistic.
  const auto data = sample(Logistic{0.0, 1.0}, 14, SeedSpec{61, 0});
  TestSpec spec;
  spec.test = TestKind::KsOneSample;
  spec.null_spec = FullySpecified{Normal{0.0, 0.8}};
  const double exact = ucomp_small_oracle(data, 8, spec);
  ASSERT_GT(exact, 0.02);
  ASSERT_LT(exact, 0.98);
  const std::size_t reps = 100000;
  const auto p = estimate_power(data, spec, 8, reps, ResampleScheme::Subsample, SeedSpec{62, 0});
  EXPECT_NEAR(p.beta_hat, exact, 3.0 * std::sqrt(exact * (1 - exact) / reps));
}

TEST(VarianceBound, Arithmetic) {
  EXPECT_NEAR(variance_bound(0.5, 1000, 485), 0.12125, 1e-12);
  EXPECT_NEAR(0.25 / variance_bound(0.5, 1000, 485), 1000.0 / 485.0, 1e-12);
  EXPECT_EQ(variance_bound(0.0, 10, 3), 0.0);
  EXPECT_EQ(variance_bound(1.0, 10, 3), 0.0);
  EXPECT_THROW(variance_bound(0.5, 3, 10), InputError);
}

TEST(TheoremOne, ExactVarianceMatchesSimulatedUcomp) {
  oracle::DiscreteKernel kernel;
  kernel.m = 4;
  kernel.threshold = 4.5;
  const auto sigma = kernel.sigma_sq();
  const std::size_t n = 12;
  const double predicted = ucomp_variance_exact(sigma, n, kernel.m);
  Rng rng(SeedSpec{63, 0});
  std::vector<double> values;
  for (int k = 0; k < 2000; ++k) values.push_back(ucomp_small_oracle(oracle::discrete_data(n, rng), kernel.m, kernel));
  const auto [var, se] = oracle::variance_with_error(values);
  EXPECT_NEAR(var, predicted, 3.0 * se);
  EXPECT_NEAR(oracle::mean(values), kernel.conditional_mean({}), 4.0 * std::sqrt(var / 2000));
}

TEST(TheoremOne, VarianceBoundHoldsForRandomKernels) {
  Rng rng(SeedSpec{64, 0});
  for (int trial = 0; trial < 6; ++trial) {
    oracle::DiscreteKernel kernel;
    kernel.m = 2 + static_cast<int>(rng.below(3));
    for (auto& w : kernel.weight) w = rng.uniform();
    kernel.threshold = kernel.m * (0.2 + 0.6 * rng.uniform());
    const double beta = kernel.conditional_mean({});
    const std::size_t n = 10;
    std::vector<double> values;
    for (int k = 0; k < 2000; ++k) values.push_back(ucomp_small_oracle(oracle::discrete_data(n, rng), kernel.m, kernel));
    const auto [var, se] = oracle::variance_with_error(values);
    EXPECT_LE(var, variance_bound(beta, n, kernel.m) + 3.0 * se) << trial;
    EXPECT_LE(ucomp_variance_exact(kernel.sigma_sq(), n, kernel.m), variance_bound(beta, n, kernel.m) + 1e-12);
  }
}

TEST(TheoremTwo, StandardizedUcompIsNormal) {
  // Kernel x1 x2 x3 on N(10, 1) data: U_comp is the third elementary
  // symmetric polynomial over C(n, 3), computable in one pass.
  const std::size_t n = 500;
  std::vector<double> values;
  for (std::uint64_t k = 0; k < 2000; ++k) {
    const auto x = sample(Normal{10.0, 1.0}, n, SeedSpec{65, k});
    double e1 = 0.0;
    double e2 = 0.0;
    double e3 = 0.0;
    for (double v : x) {
      e3 += e2 * v;
      e2 += e1 * v;
      e1 += v;
    }
    values.push_back(e3 / (n * (n - 1.0) * (n - 2.0) / 6.0));
  }
  const double mu = oracle::mean(values);
  const double sd = std::sqrt(oracle::variance(values));
  for (auto& v : values) v = (v - mu) / sd;
  const auto result = shapiro_wilk(values, 0.01);
  ASSERT_TRUE(result.p_value.has_value());
  EXPECT_GT(*result.p_value, 0.01);
}

TEST(LocalAlternative, ZeroOverlapDecouples) {
  LocalAltSpec spec;
  spec.a = 0.0;
  spec.draws = 20000;
  const double single = 1.0 - oracle::boost_noncentral_cdf(spec.d, spec.delta * spec.delta, spec.c_alpha);
  const auto conditional = local_alt_A(spec, SeedSpec{66, 0});
  EXPECT_NEAR(conditional.value, single * single, 1e-10);
  const auto product = local_alt_A(spec, SeedSpec{66, 0}, LocalAltEstimator::Product);
  EXPECT_NEAR(product.value, single * single, 3.0 * product.std_error);
}

TEST(LocalAlternative, EstimatorsAgreeAndStayInUnitInterval) {
  for (double a : {0.1, 0.5, 0.9}) {
    LocalAltSpec spec;
    spec.a = a;
    spec.draws = 40000;
    const auto c = local_alt_A(spec, SeedSpec{67, 0});
    const auto p = local_alt_A(spec, SeedSpec{68, 0}, LocalAltEstimator::Product);
    EXPECT_NEAR(c.value, p.value, 3.0 * std::hypot(c.std_error, p.std_error)) << a;
    EXPECT_LE(c.std_error, p.std_error);
    for (const auto& v : {c, p}) {
      EXPECT_GE(v.value, 0.0);
      EXPECT_LE(v.value, 1.0);
    }
  }
  LocalAltSpec bad;
  bad.a = 1.0;
  EXPECT_THROW(local_alt_A(bad, SeedSpec{}), InputError);
}

TEST(LocalAlternative, DeterministicAcrossThreadCounts) {
  LocalAltSpec spec;
  spec.draws = 5000;
  const auto one = local_alt_A(spec, SeedSpec{69, 0}, LocalAltEstimator::Conditional, Execution{1});
  const auto sixteen = local_alt_A(spec, SeedSpec{69, 0}, LocalAltEstimator::Conditional, Execution{16});
  EXPECT_EQ(one.value, sixteen.value);
  EXPECT_EQ(one.std_error, sixteen.std_error);
}

TEST(Eiss, ExceedsTheSamplingFractionBound) {
  for (double phi_inv : {2.0, 5.0, 10.0, 30.0}) {
    const auto r = eiss_local(1.0 / phi_inv, 25, 0.05, 3.67, 50000, SeedSpec{70, 0}, PowerCentering::NominalHalf,
                              LocalAltEstimator::Conditional, Execution{}, 37.66);
    EXPECT_EQ(r.bound_phi_inv, phi_inv);
    // delta-method error of eiss from the error in A
    const double eiss_se = r.eiss * r.a_std_error / r.variance;
    EXPECT_GE(r.eiss, phi_inv - 3.0 * eiss_se) << phi_inv;
    EXPECT_NEAR(r.eiss, 0.25 / r.variance, 1e-12);
  }
}

TEST(Eiss, ExactPowerCentering) {
  const auto r = eiss_local(0.5, 25, 0.05, 3.67, 20000, SeedSpec{71, 0}, PowerCentering::ExactPower);
  const double power = 1.0 - oracle::boost_noncentral_cdf(25, 3.67 * 3.67, oracle::chi_square_upper_point(25, 0.05));
  EXPECT_NEAR(r.beta, power, 1e-9);
  EXPECT_NEAR(r.eiss, power * (1 - power) / r.variance, 1e-9);
  EXPECT_THROW(eiss_local(1.0, 25, 0.05, 3.67, 100, SeedSpec{}), InputError);
}

TEST(Eiss, NonpositiveVarianceIsReported) {
  // At a tiny overlap A is within Monte Carlo error of beta^2.
  EXPECT_THROW(eiss_local(1e-4, 25, 0.05, 3.67, 2000, SeedSpec{72, 0}, PowerCentering::ExactPower), NumericError);
}

TEST(SimulateEstimator, NullTruthIsCalibrated) {
  TestSpec spec;
  spec.test = TestKind::KsOneSample;
  spec.null_spec = EstimatedNormal{};
  const auto d =
      simulate_estimator_distribution(Normal{2.0, 3.0}, 300, 100, 60, 200, ResampleScheme::Subsample, spec,
                                      SeedSpec{73, 0});
  ASSERT_EQ(d.estimates.size(), 60u);
  EXPECT_NEAR(d.mean, 0.05, 0.02);
  EXPECT_NEAR(d.eiss_empirical, d.mean * (1 - d.mean) / (d.sd * d.sd), 1e-12);
  EXPECT_THROW(simulate_estimator_distribution(Normal{}, 300, 100, 49, 200, ResampleScheme::Subsample, spec,
                                               SeedSpec{}),
               InputError);
}
