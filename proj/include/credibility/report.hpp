#pragma once

// Input parsing, job configuration and JSON/CSV reports for the command-line
// tool. Everything here sits on top of the numerical modules.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "credibility/categorical.hpp"
#include "credibility/credindex.hpp"
#include "credibility/eisslab.hpp"
#include "credibility/error.hpp"
#include "credibility/goftests.hpp"
#include "credibility/resample.hpp"
#include "credibility/statdist.hpp"

namespace credibility {

using Json = nlohmann::ordered_json;

inline constexpr int kReportVersion = 1;

// ---------------------------------------------------------------------------
// Text parsing

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::optional<double> parse_double(std::string_view token) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || end != token.data() + token.size() || token.empty()) return std::nullopt;
  return value;
}

inline std::optional<std::int64_t> parse_int(std::string_view token) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  std::int64_t value = 0;
  const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || end != token.data() + token.size() || token.empty()) return std::nullopt;
  return value;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Lines with their 1-based numbers; blank lines and a leading BOM are dropped.
inline std::vector<std::pair<std::size_t, std::string_view>> numbered_lines(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t number = 0;
  for (auto line : split(text, '\n')) {
    ++number;
    if (!trim(line).empty()) out.emplace_back(number, trim(line));
  }
  return out;
}

}  // namespace detail

/// One numeric column; a non-numeric first line is taken as a header.
inline Sample parse_sample(std::string_view text, const std::string& source = "input") {
  const auto lines = detail::numbered_lines(text);
  if (lines.empty()) throw InputError(source + ": no data");
  Sample out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto [number, line] = lines[i];
    const auto value = detail::parse_double(line);
    if (!value) {
      if (i == 0 && line.find(',') == std::string_view::npos) continue;
      throw InputError(source + ": line " + std::to_string(number) + ": expected one number, got '" +
                       std::string(line) + "'");
    }
    if (!std::isfinite(*value)) {
      throw InputError(source + ": line " + std::to_string(number) + ": value is not finite");
    }
    out.push_back(*value);
  }
  if (out.empty()) throw InputError(source + ": no data rows after the header");
  return out;
}

inline Sample ingest_sample(const std::string& path) { return parse_sample(detail::read_file(path), path); }

inline ContingencyTable parse_table(std::string_view text, const std::string& source = "input") {
  const auto lines = detail::numbered_lines(text);
  if (lines.empty()) throw InputError(source + ": no data");
  std::vector<std::vector<std::int64_t>> grid;
  for (const auto& [number, line] : lines) {
    const auto fields = detail::split(line, ',');
    if (!grid.empty() && fields.size() != grid.front().size()) {
      throw InputError(source + ": line " + std::to_string(number) + ": expected " +
                       std::to_string(grid.front().size()) + " columns, found " + std::to_string(fields.size()));
    }
    std::vector<std::int64_t> row;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const auto value = detail::parse_int(fields[c]);
      const std::string where = source + ": line " + std::to_string(number) + ", column " + std::to_string(c + 1);
      if (!value) throw InputError(where + ": '" + std::string(detail::trim(fields[c])) + "' is not an integer");
      if (*value < 0) throw InputError(where + ": counts must be nonnegative");
      row.push_back(*value);
    }
    grid.push_back(std::move(row));
  }
  auto table = ContingencyTable::from_rows(grid);
  if (!table.has_positive_margins()) throw InputError(source + ": the table has a zero row or column margin");
  return table;
}

inline ContingencyTable ingest_table(const std::string& path) { return parse_table(detail::read_file(path), path); }

/// "normal:loc,scale", "logistic:loc,scale", "chisq:df" or "ncchisq:df,lambda".
inline DistributionFamily parse_family(std::string_view text) {
  const auto colon = text.find(':');
  const std::string name(detail::trim(text.substr(0, colon)));
  std::vector<double> args;
  if (colon != std::string_view::npos) {
    for (auto field : detail::split(text.substr(colon + 1), ',')) {
      const auto value = detail::parse_double(field);
      if (!value) throw InputError("distribution '" + std::string(text) + "': bad parameter");
      args.push_back(*value);
    }
  }
  auto arg = [&](std::size_t i, double fallback) { return i < args.size() ? args[i] : fallback; };
  auto integral = [&](double v) {
    detail::require(v == std::floor(v) && v >= 1 && v < 1e6, "distribution '" + std::string(text) +
                                                                  "': df must be a positive integer");
    return static_cast<int>(v);
  };
  DistributionFamily family;
  if (name == "normal") {
    family = Normal{arg(0, 0.0), arg(1, 1.0)};
  } else if (name == "logistic") {
    family = Logistic{arg(0, 0.0), arg(1, 1.0)};
  } else if (name == "chisq") {
    detail::require(!args.empty(), "chisq needs a df parameter");
    family = ChiSquare{integral(args[0])};
  } else if (name == "ncchisq") {
    detail::require(args.size() == 2, "ncchisq needs df and noncentrality");
    family = NoncentralChiSquare{integral(args[0]), args[1]};
  } else {
    throw InputError("unknown distribution '" + name + "' (normal, logistic, chisq, ncchisq)");
  }
  detail::require(args.size() <= 2, "distribution '" + std::string(text) + "': too many parameters");
  validate(family);
  return family;
}

inline TestKind parse_test_kind(std::string_view name) {
  for (auto kind : {TestKind::KsOneSample, TestKind::KsTwoSample, TestKind::ShapiroWilk,
                    TestKind::PearsonChiSquareNormal}) {
    if (name == to_string(kind)) return kind;
  }
  throw InputError("unknown test '" + std::string(name) + "' (ks1, ks2, shapiro-wilk, pearson)");
}

inline ResampleScheme parse_scheme(std::string_view name) {
  if (name == "subsample") return ResampleScheme::Subsample;
  if (name == "bootstrap") return ResampleScheme::Bootstrap;
  throw InputError("unknown scheme '" + std::string(name) + "' (subsample, bootstrap)");
}

// ---------------------------------------------------------------------------
// Power-curve CSV

inline std::string format_g17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

inline constexpr std::string_view kCurveHeader = "m,beta_hat,std_error,replicates,rejections,errors";

inline std::string power_curve_csv(const PowerCurve& curve) {
  std::string out(kCurveHeader);
  out += '\n';
  for (const auto& p : curve) {
    out += std::to_string(p.m) + ',' + format_g17(p.beta_hat) + ',' + format_g17(p.std_error) + ',' +
           std::to_string(p.replicates) + ',' + std::to_string(p.rejections) + ',' + std::to_string(p.errors) + '\n';
  }
  return out;
}

inline PowerCurve parse_power_curve_csv(std::string_view text) {
  const auto lines = detail::numbered_lines(text);
  if (lines.empty() || lines.front().second != kCurveHeader) {
    throw InputError("power curve CSV: expected header '" + std::string(kCurveHeader) + "'");
  }
  PowerCurve curve;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto [number, line] = lines[i];
    const auto fields = detail::split(line, ',');
    const std::string where = "power curve CSV: line " + std::to_string(number);
    if (fields.size() != 6) throw InputError(where + ": expected 6 fields");
    const auto m = detail::parse_int(fields[0]);
    const auto beta = detail::parse_double(fields[1]);
    const auto se = detail::parse_double(fields[2]);
    const auto reps = detail::parse_int(fields[3]);
    const auto rej = detail::parse_int(fields[4]);
    const auto err = detail::parse_int(fields[5]);
    if (!m || !beta || !se || !reps || !rej || !err || *m < 1 || *reps < 1 || *rej < 0 || *rej > *reps || *err < 0) {
      throw InputError(where + ": malformed row");
    }
    PowerPoint p{static_cast<std::size_t>(*m), static_cast<std::size_t>(*reps), static_cast<std::size_t>(*rej),
                 static_cast<std::size_t>(*err), *beta, *se};
    curve.push_back(p);
  }
  return curve;
}

// ---------------------------------------------------------------------------
// JSON encodings

inline Json to_json(const DistributionFamily& family) {
  return std::visit(
      [](const auto& f) -> Json {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, Normal>) {
          return {{"family", "normal"}, {"location", f.location}, {"scale", f.scale}};
        } else if constexpr (std::is_same_v<F, Logistic>) {
          return {{"family", "logistic"}, {"location", f.location}, {"scale", f.scale}};
        } else if constexpr (std::is_same_v<F, ChiSquare>) {
          return {{"family", "chisq"}, {"df", f.df}};
        } else {
          return {{"family", "ncchisq"}, {"df", f.df}, {"noncentrality", f.noncentrality}};
        }
      },
      family);
}

inline Json to_json(const TestSpec& spec) {
  Json j{{"test", to_string(spec.test)}, {"alpha", spec.alpha}};
  if (const auto* full = std::get_if<FullySpecified>(&spec.null_spec)) {
    j["null"] = to_json(full->family);
  } else {
    j["null"] = "estimated-normal";
  }
  j["cells"] = spec.cells ? Json(*spec.cells) : Json(nullptr);
  return j;
}

inline Json to_json(const PowerPoint& p) {
  return {{"m", p.m},           {"replicates", p.replicates}, {"rejections", p.rejections},
          {"errors", p.errors}, {"beta_hat", p.beta_hat},     {"std_error", p.std_error}};
}

inline Json to_json(const PowerCurve& curve) {
  Json arr = Json::array();
  for (const auto& p : curve) arr.push_back(to_json(p));
  return arr;
}

inline Json to_json(const SearchConfig& c) {
  return {{"replicates_coarse", c.replicates_coarse},
          {"replicates_fine", c.replicates_fine},
          {"m_cap", c.m_cap ? Json(*c.m_cap) : Json(nullptr)},
          {"initial_m", c.initial_m},
          {"coarse_points", c.coarse_points},
          {"max_refinements", c.max_refinements},
          {"max_evaluations", c.max_evaluations}};
}

inline Json to_json(const CredibilityEstimate& e) {
  Json j;
  if (e.n_star) {
    j["n_star"] = *e.n_star;
    j["sqrt_n_star"] = e.sqrt_n_star();
  } else {
    j["n_star"] = "infinite";
    j["sqrt_n_star"] = "infinite";
  }
  j["bracket"] = {{"m_low", e.bracket.m_low}, {"m_high", e.bracket.m_high}};
  j["target_beta"] = e.target_beta;
  j["alpha"] = e.alpha;
  j["scheme"] = e.scheme;
  j["data_size"] = e.data_size ? Json(*e.data_size) : Json(nullptr);
  j["phi_inv"] = e.phi_inv ? Json(*e.phi_inv) : Json(nullptr);
  j["eiss_lower_bound"] = e.eiss_lower_bound ? Json(*e.eiss_lower_bound) : Json(nullptr);
  if (e.phi_inv) {
    j["low_reliability"] = *e.phi_inv <= 10.0;
    j["reliability_note"] = *e.phi_inv <= 10.0
                                ? "n/N* <= 10: few effectively independent resamples; treat N* as rough"
                                : "n/N* > 10";
  } else {
    j["low_reliability"] = nullptr;
    j["reliability_note"] = e.finite() ? "population mode: no finite-sample reliability bound"
                                       : "the test never reached the target power; the model is credible at every "
                                         "sample size examined";
  }
  j["test_evaluations"] = e.test_evaluations;
  j["diagnostic"] = e.diagnostic;
  return j;
}

inline Json to_json(const NstarInterval& ci) {
  return {{"lower", ci.lower},           {"upper", ci.upper},       {"median", ci.median},
          {"level", ci.level},           {"replicates", ci.replicates}, {"redraws", ci.redraws}};
}

inline Json to_json(const VarianceReport& r) {
  return {{"variance", r.variance}, {"eiss", r.eiss},   {"bound_phi_inv", r.bound_phi_inv},
          {"beta", r.beta},         {"a", r.a_value},   {"a_std_error", r.a_std_error},
          {"c_alpha", r.c_alpha}};
}

inline Json to_json(const EstimatorDistribution& d) {
  return {{"mean", d.mean}, {"sd", d.sd}, {"eiss_empirical", d.eiss_empirical}, {"datasets", d.estimates.size()}};
}

// ---------------------------------------------------------------------------
// Jobs

enum class Command { Power, Nstar, Table, Eiss, Simulate };
enum class OutputFormat { Json, Csv };

inline std::string to_string(Command c) {
  switch (c) {
    case Command::Power: return "power";
    case Command::Nstar: return "nstar";
    case Command::Table: return "table";
    case Command::Eiss: return "eiss";
    case Command::Simulate: return "simulate";
  }
  return "?";
}

inline const std::vector<std::string>& simulation_presets() {
  static const std::vector<std::string> presets{"normal-vs-logistic-1s", "normal-vs-logistic-2s", "table4",
                                                "table5"};
  return presets;
}

struct JobConfig {
  Command command = Command::Power;
  std::optional<std::string> input_path;
  std::optional<DistributionFamily> truth;  // population mode when no input
  TestSpec test;
  std::optional<ResampleScheme> scheme;     // default: subsample, bootstrap for tables
  double target_beta = 0.5;
  std::size_t replicates = 1000;
  std::uint64_t seed = 1;
  std::vector<std::size_t> m_grid;
  SearchConfig search;
  std::optional<std::size_t> start_hint;
  OutputFormat format = OutputFormat::Json;
  unsigned jobs = 0;

  // table
  std::size_t ci_replicates = 1000;
  double ci_level = 0.95;
  bool run_search = true;

  // eiss
  std::vector<double> phi_inv;
  int d = 25;
  double delta = 3.67;
  std::optional<double> c_alpha;
  std::size_t draws = 200000;
  PowerCentering centering = PowerCentering::NominalHalf;
  LocalAltEstimator estimator = LocalAltEstimator::Conditional;

  // simulate
  std::string preset;
  std::size_t datasets = 200;
  std::size_t n = 1000;
  std::size_t m = 485;

  ResampleScheme resolved_scheme() const {
    return scheme.value_or(command == Command::Table ? ResampleScheme::Bootstrap : ResampleScheme::Subsample);
  }

  void validate() const {
    test.validate();
    search.validate();
    detail::require(target_beta > test.alpha && target_beta <= 0.99, "target beta must lie in (alpha, 0.99]");
    detail::require(replicates >= 1, "replicates must be >= 1");
    for (std::size_t i = 0; i < m_grid.size(); ++i) {
      detail::require(m_grid[i] >= 1, "m grid values must be >= 1");
      if (i > 0) detail::require(m_grid[i] > m_grid[i - 1], "m grid must be strictly increasing");
    }
    switch (command) {
      case Command::Power:
        detail::require(!m_grid.empty(), "power needs an m grid (--m)");
        [[fallthrough]];
      case Command::Nstar:
        detail::require(input_path.has_value() != truth.has_value(), "give exactly one of --input or --truth");
        if (truth) {
          detail::require(!scheme.has_value(), "--scheme applies to data input, not --truth");
        }
        break;
      case Command::Table:
        detail::require(input_path.has_value(), "table needs --input");
        detail::require(ci_replicates == 0 || ci_replicates >= 200, "bootstrap interval needs >= 200 replicates");
        detail::require(ci_level >= 0.0 && ci_level < 1.0, "interval level must lie in [0, 1)");
        break;
      case Command::Eiss:
        detail::require(!phi_inv.empty(), "eiss needs at least one --phi-inv value");
        for (double v : phi_inv) detail::require(v > 1.0, "--phi-inv values must exceed 1");
        detail::require(d >= 1, "--d must be >= 1");
        detail::require(delta >= 0.0, "--delta must be nonnegative");
        detail::require(!c_alpha || *c_alpha > 0.0, "--c-alpha must be positive");
        detail::require(draws >= 2, "--draws must be >= 2");
        break;
      case Command::Simulate: {
        const auto& presets = simulation_presets();
        detail::require(std::find(presets.begin(), presets.end(), preset) != presets.end(),
                        "unknown preset '" + preset + "'");
        detail::require(datasets >= 50, "--datasets must be >= 50");
        detail::require(m >= 4 && m <= n, "simulation needs 4 <= m <= n");
        break;
      }
    }
  }
};

/// A finished job: the JSON report, the CSV rendering when the job has a
/// tabular result, and the exit status (nonzero when part of a batch failed).
struct JobOutput {
  Json report;
  std::optional<std::string> csv;
  int status = 0;
};

namespace detail {

inline Json config_json(const JobConfig& c) {
  Json j{{"command", to_string(c.command)}};
  j["input"] = c.input_path ? Json(*c.input_path) : Json(nullptr);
  j["truth"] = c.truth ? to_json(*c.truth) : Json(nullptr);
  if (c.command == Command::Table) {
    j["test"] = {{"test", to_string(TestKind::MultinomialLrt)}, {"alpha", c.test.alpha}, {"null", "independence"},
                 {"cells", nullptr}};
  } else {
    j["test"] = to_json(c.test);
  }
  j["scheme"] = c.truth ? "population" : to_string(c.resolved_scheme());
  j["target_beta"] = c.target_beta;
  j["replicates"] = c.replicates;
  j["m_grid"] = c.m_grid;
  j["search"] = to_json(c.search);
  j["start_hint"] = c.start_hint ? Json(*c.start_hint) : Json(nullptr);
  j["format"] = c.format == OutputFormat::Json ? "json" : "csv";
  j["jobs"] = c.jobs;
  switch (c.command) {
    case Command::Table:
      j["ci_replicates"] = c.ci_replicates;
      j["ci_level"] = c.ci_level;
      j["run_search"] = c.run_search;
      break;
    case Command::Eiss:
      j["phi_inv"] = c.phi_inv;
      j["d"] = c.d;
      j["delta"] = c.delta;
      j["c_alpha"] = c.c_alpha ? Json(*c.c_alpha) : Json(nullptr);
      j["draws"] = c.draws;
      j["centering"] = to_string(c.centering);
      j["estimator"] = to_string(c.estimator);
      break;
    case Command::Simulate:
      j["preset"] = c.preset;
      j["datasets"] = c.datasets;
      j["n"] = c.n;
      j["m"] = c.m;
      break;
    default: break;
  }
  return j;
}

inline SampleSource make_source(const JobConfig& c, const Sample& data) {
  if (c.truth) return PopulationSource{*c.truth};
  return DataSource{data, c.resolved_scheme()};
}

inline void run_power(const JobConfig& c, JobOutput& out, const Execution& exec) {
  Sample data;
  if (c.input_path) {
    data = ingest_sample(*c.input_path);
    out.report["data"] = {{"n", data.size()}};
  }
  auto curve = power_curve(make_source(c, data), c.test, c.m_grid, c.replicates, SeedSpec{c.seed, 0}, exec);
  out.report["power_curve"] = to_json(curve);
  out.csv = power_curve_csv(curve);
}

inline void run_nstar(const JobConfig& c, JobOutput& out, const Execution& exec) {
  Sample data;
  if (c.input_path) {
    data = ingest_sample(*c.input_path);
    out.report["data"] = {{"n", data.size()}};
  }
  const auto estimate =
      nstar_beta(make_source(c, data), c.test, SeedSpec{c.seed, 0}, c.search, c.target_beta, c.start_hint, exec);
  out.report["power_curve"] = to_json(estimate.curve);
  out.report["estimate"] = to_json(estimate);
  out.csv = power_curve_csv(estimate.curve);
}

inline void run_table(const JobConfig& c, JobOutput& out, const Execution& exec) {
  const auto table = ingest_table(*c.input_path);
  const auto fit = fit_independence(table);
  const auto lrt = lrt_test(table, fit, c.test.alpha);
  Json t{{"rows", table.rows()},  {"cols", table.cols()}, {"n", table.total()},   {"df", fit.df},
         {"g2", fit.g2},          {"x2", fit.x2},         {"kl_rate", fit.kl_rate}};
  t["lrt"] = {{"statistic", lrt.statistic},
              {"critical_value", lrt.critical_value},
              {"reject", lrt.reject},
              {"p_value", lrt.p_value ? Json(*lrt.p_value) : Json(nullptr)}};
  auto finite_or = [](double v) { return std::isfinite(v) ? Json(v) : Json("infinite"); };
  t["delta_star"] = solve_delta_star(fit.df, c.test.alpha, 0.5);
  t["nstar_asy"] = finite_or(nstar_asy(table, fit, c.test.alpha));
  t["nstar_asy2"] = finite_or(nstar_asy2(table, fit, c.test.alpha));
  if (c.ci_replicates > 0) {
    t["bootstrap_ci"] =
        to_json(bootstrap_ci_nstar_asy(table, c.test.alpha, c.ci_replicates, c.ci_level,
                                       SeedSpec{c.seed, 1ULL << 60}, exec));
  } else {
    t["bootstrap_ci"] = nullptr;
  }
  out.report["table"] = t;

  PowerCurve curve;
  if (!c.m_grid.empty()) {
    for (std::size_t m : c.m_grid) {
      curve.push_back(table_power(table, c.test.alpha, m, c.replicates, c.resolved_scheme(), SeedSpec{c.seed, 0}, exec));
    }
    out.report["power_checks"] = to_json(curve);
  }
  if (c.run_search) {
    const auto estimate = find_nstar_categorical(table, c.test.alpha, c.resolved_scheme(), SeedSpec{c.seed, 0},
                                                 c.search, exec, c.target_beta);
    out.report["power_curve"] = to_json(estimate.curve);
    out.report["estimate"] = to_json(estimate);
    out.csv = power_curve_csv(estimate.curve);
  } else if (!curve.empty()) {
    out.csv = power_curve_csv(curve);
  }
}

inline void eiss_rows(const std::vector<double>& phi_inv, int d, double alpha, double delta,
                      std::optional<double> c_alpha, std::size_t draws, PowerCentering centering,
                      LocalAltEstimator estimator, std::uint64_t seed, const Execution& exec, JobOutput& out) {
  Json rows = Json::array();
  std::string csv = "phi_inv,a,a_std_error,variance,eiss,bound_phi_inv,status\n";
  std::size_t index = 0;
  for (double v : phi_inv) {
    Json row{{"phi_inv", v}};
    const SeedSpec stream{seed, static_cast<std::uint64_t>(index++) << 40};
    try {
      const auto r = eiss_local(1.0 / v, d, alpha, delta, draws, stream, centering, estimator, exec, c_alpha);
      row.update(to_json(r));
      row["status"] = "ok";
      csv += format_g17(v) + ',' + format_g17(r.a_value) + ',' + format_g17(r.a_std_error) + ',' +
             format_g17(r.variance) + ',' + format_g17(r.eiss) + ',' + format_g17(r.bound_phi_inv) + ",ok\n";
    } catch (const NumericError& e) {
      row["status"] = "error";
      row["error"] = e.what();
      out.status = 3;
      csv += format_g17(v) + ",,,,," + format_g17(v) + ",error\n";
    }
    rows.push_back(row);
  }
  out.report["eiss"] = rows;
  out.csv = csv;
}

inline void run_eiss(const JobConfig& c, JobOutput& out, const Execution& exec) {
  eiss_rows(c.phi_inv, c.d, c.test.alpha, c.delta, c.c_alpha, c.draws, c.centering, c.estimator, c.seed, exec, out);
}

inline const DistributionFamily& logistic_truth() {
  static const DistributionFamily truth = Logistic{0.0, 1.0};
  return truth;
}

/// Normal with the logistic's mean and variance: scale pi / sqrt(3).
inline DistributionFamily moment_matched_normal() { return Normal{0.0, std::numbers::pi / std::sqrt(3.0)}; }

inline void run_simulate(const JobConfig& c, JobOutput& out, const Execution& exec) {
  Json sim{{"preset", c.preset}};
  if (c.preset == "normal-vs-logistic-2s" || c.preset == "normal-vs-logistic-1s") {
    const bool two_sample = c.preset == "normal-vs-logistic-2s";
    TestSpec spec;
    spec.alpha = c.test.alpha;
    if (two_sample) {
      spec.test = TestKind::KsTwoSample;
      spec.null_spec = FullySpecified{moment_matched_normal()};
    } else {
      spec.test = TestKind::KsOneSample;
      spec.null_spec = EstimatedNormal{};
    }
    const std::vector<std::size_t> grid =
        !c.m_grid.empty() ? c.m_grid
        : two_sample      ? std::vector<std::size_t>{100, 500, 1000, 2000, 4000, 6000}
                          : std::vector<std::size_t>{100, 400, 450, 500, 1000, 2500};
    const SampleSource source = PopulationSource{logistic_truth()};
    sim["truth"] = to_json(logistic_truth());
    sim["test"] = to_json(spec);
    const auto curve = power_curve(source, spec, grid, c.replicates, SeedSpec{c.seed, 0}, exec);
    out.report["power_curve"] = to_json(curve);
    out.csv = power_curve_csv(curve);
    const auto estimate = nstar_beta(source, spec, SeedSpec{c.seed, 0}, c.search, c.target_beta, c.start_hint, exec);
    out.report["estimate"] = to_json(estimate);
    sim["search_curve"] = to_json(estimate.curve);
  } else if (c.preset == "table4") {
    TestSpec spec;
    spec.alpha = c.test.alpha;
    spec.test = TestKind::KsOneSample;
    spec.null_spec = EstimatedNormal{};
    sim["truth"] = to_json(logistic_truth());
    sim["test"] = to_json(spec);
    sim["n"] = c.n;
    sim["m"] = c.m;
    sim["phi_inv"] = static_cast<double>(c.n) / static_cast<double>(c.m);
    for (auto scheme : {ResampleScheme::Bootstrap, ResampleScheme::Subsample}) {
      const auto dist = simulate_estimator_distribution(logistic_truth(), c.n, c.m, c.datasets, c.replicates,
                                                        scheme, spec, SeedSpec{c.seed, 0}, exec);
      sim[to_string(scheme)] = to_json(dist);
    }
  } else {
    const std::vector<double> phi_inv =
        !c.phi_inv.empty() ? c.phi_inv
                           : std::vector<double>{2, 3, 4, 5, 10, 15, 20, 25, 30, 40, 50, 60, 75, 80, 100};
    sim["d"] = 25;
    sim["delta"] = 3.67;
    sim["c_alpha"] = 37.66;
    sim["centering"] = to_string(c.centering);
    sim["estimator"] = to_string(c.estimator);
    eiss_rows(phi_inv, 25, 0.05, 3.67, 37.66, c.draws, c.centering, c.estimator, c.seed, exec, out);
  }
  out.report["simulation"] = sim;
}

}  // namespace detail

/// Runs one job. Module errors propagate as exceptions; the caller maps them
/// to exit codes.
inline JobOutput run(const JobConfig& config) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();
  const Execution exec{config.jobs};
  JobOutput out;
  out.report["report_version"] = kReportVersion;
  out.report["command"] = to_string(config.command);
  out.report["config"] = detail::config_json(config);
  out.report["seed"] = {{"master_seed", config.seed}};
  switch (config.command) {
    case Command::Power: detail::run_power(config, out, exec); break;
    case Command::Nstar: detail::run_nstar(config, out, exec); break;
    case Command::Table: detail::run_table(config, out, exec); break;
    case Command::Eiss: detail::run_eiss(config, out, exec); break;
    case Command::Simulate: detail::run_simulate(config, out, exec); break;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  out.report["timing"] = {{"wall_seconds", seconds}};
  return out;
}

/// 1 = input error, 2 = search or budget error, 3 = numeric or internal error.
inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const InputError*>(&e)) return 1;
  if (dynamic_cast<const SearchError*>(&e)) return 2;
  return 3;
}

}  // namespace credibility
