// Regenerates include/credibility/detail/lilliefors_table.hpp: upper quantiles
// of sqrt(n) * D for the KS statistic against a normal fitted to the same
// sample, from 100k null replicates per tabulated n.
//
//   gen_lilliefors_table [--replicates N] [--jobs J] > lilliefors_table.hpp

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include <CLI11.hpp>

#include "credibility/goftests.hpp"
#include "credibility/parallel.hpp"

namespace {

constexpr std::uint64_t kSeed = 0x4C494C4C49454653ULL;

const std::vector<double> kAlphaGrid = {0.001, 0.0025, 0.005, 0.01, 0.02, 0.025, 0.03, 0.04,
                                        0.05,  0.06,   0.075, 0.08, 0.1,  0.125, 0.15, 0.175,
                                        0.2,   0.25,   0.3,   0.35, 0.4,  0.45,  0.5};

std::vector<std::size_t> size_grid() {
  std::vector<std::size_t> sizes;
  for (std::size_t n = 4; n <= 30; ++n) sizes.push_back(n);
  for (std::size_t n : {35, 40, 45, 50, 60, 70, 80, 90, 100, 120, 140, 160, 180, 200, 250, 300,
                        400, 500, 700, 1000, 1500, 2000}) {
    sizes.push_back(n);
  }
  return sizes;
}

double upper_quantile(const std::vector<double>& sorted, double alpha) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * (1.0 - alpha);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate the Lilliefors critical value table"};
  std::size_t replicates = 100000;
  unsigned jobs = 0;
  app.add_option("--replicates", replicates, "null replicates per sample size");
  app.add_option("--jobs", jobs, "worker threads (0 = all cores)");
  CLI11_PARSE(app, argc, argv);

  const auto sizes = size_grid();
  std::vector<std::vector<double>> rows;
  for (std::size_t n : sizes) {
    auto batch = credibility::run_replicates<double>(
        replicates, credibility::Execution{jobs}, [n](std::size_t b) {
          credibility::Rng rng(credibility::SeedSpec{kSeed, (static_cast<std::uint64_t>(n) << 32) | b});
          std::vector<double> x(n);
          for (auto& v : x) v = rng.normal();
          std::sort(x.begin(), x.end());
          const auto [mean, sd] = credibility::detail::mean_sd(x, 1);
          const double d = credibility::ks_statistic_sorted(
              x, [&](double v) { return credibility::normal_cdf((v - mean) / sd); });
          return std::sqrt(static_cast<double>(n)) * d;
        });
    std::sort(batch.values.begin(), batch.values.end());
    std::vector<double> row;
    for (double alpha : kAlphaGrid) row.push_back(upper_quantile(batch.values, alpha));
    rows.push_back(std::move(row));
    std::fprintf(stderr, "n=%zu done\n", n);
  }

  std::printf("#pragma once\n\n");
  std::printf("// Generated by tools/gen_lilliefors_table.cpp (%zu null replicates per n).\n", replicates);
  std::printf("// Upper quantiles of sqrt(n) * D, D the KS distance to the normal fitted\n");
  std::printf("// with the sample mean and the n-1 standard deviation. Do not edit.\n\n");
  std::printf("#include <array>\n#include <cstddef>\n\n");
  std::printf("namespace credibility::detail::lilliefors {\n\n");
  std::printf("inline constexpr std::array<double, %zu> kAlphas = {", kAlphaGrid.size());
  for (std::size_t i = 0; i < kAlphaGrid.size(); ++i) std::printf("%s%g", i ? ", " : "", kAlphaGrid[i]);
  std::printf("};\n\n");
  std::printf("inline constexpr std::array<std::size_t, %zu> kSizes = {", sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) std::printf("%s%zu", i ? ", " : "", sizes[i]);
  std::printf("};\n\n");
  std::printf("inline constexpr std::array<std::array<double, %zu>, %zu> kScaledQuantiles = {{\n",
              kAlphaGrid.size(), sizes.size());
  for (const auto& row : rows) {
    std::printf("    {");
    for (std::size_t i = 0; i < row.size(); ++i) std::printf("%s%.6f", i ? ", " : "", row[i]);
    std::printf("},\n");
  }
  std::printf("}};\n\n}  // namespace credibility::detail::lilliefors\n");
  return 0;
}
