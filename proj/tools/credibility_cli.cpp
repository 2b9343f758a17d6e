// credibility: estimate model credibility indices from data, tables or
// simulation presets and print a JSON (or CSV) report.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "credibility/report.hpp"

namespace {

using credibility::JobConfig;

struct Flags {
  std::string input;
  std::string truth;
  std::string test = "ks1";
  std::string null_family = "estimated";
  std::string scheme;
  std::string format = "json";
  std::string output;
  std::string centering = "nominal-half";
  std::string estimator = "conditional";
  std::optional<std::uint64_t> seed;
  std::optional<int> cells;
  std::optional<std::size_t> m_cap;
  std::optional<double> c_alpha;
  std::optional<std::size_t> start;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("CREDIBILITY_SEED")) {
    const auto parsed = credibility::detail::parse_int(env);
    if (!parsed || *parsed < 0) throw credibility::InputError("CREDIBILITY_SEED must be a nonnegative integer");
    return static_cast<std::uint64_t>(*parsed);
  }
  return 1;
}

void add_common(CLI::App* cmd, JobConfig& job, Flags& flags) {
  cmd->add_option("--seed", flags.seed, "Master seed (default: $CREDIBILITY_SEED, else 1)");
  cmd->add_option("--jobs", job.jobs, "Worker threads; 0 = all cores. Never changes results");
  cmd->add_option("--format", flags.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--output,-o", flags.output, "Write the report here instead of stdout");
  cmd->add_option("--alpha", job.test.alpha, "Test size");
}

void add_test(CLI::App* cmd, JobConfig& job, Flags& flags) {
  cmd->add_option("--input,-i", flags.input, "CSV file with one numeric column");
  cmd->add_option("--truth", flags.truth, "Sample from a distribution instead, e.g. logistic:0,1");
  cmd->add_option("--test", flags.test, "ks1, ks2, shapiro-wilk or pearson");
  cmd->add_option("--null", flags.null_family,
                  "estimated (normal with fitted mean and sd) or a distribution such as normal:0,1.8138");
  cmd->add_option("--cells", flags.cells, "Pearson cell count");
  cmd->add_option("--scheme", flags.scheme, "subsample or bootstrap");
  cmd->add_option("--replicates", job.replicates, "Replicates per power point");
}

void add_search(CLI::App* cmd, JobConfig& job, Flags& flags) {
  cmd->add_option("--target-beta", job.target_beta, "Target power (0.5 gives N*)");
  cmd->add_option("--replicates-coarse", job.search.replicates_coarse, "Replicates while bracketing");
  cmd->add_option("--replicates-fine", job.search.replicates_fine, "Replicates near the crossing");
  cmd->add_option("--m-cap", flags.m_cap, "Largest m the search may try");
  cmd->add_option("--initial-m", job.search.initial_m, "First m when no start value is given");
  cmd->add_option("--start", flags.start, "Start the search at this m");
  cmd->add_option("--max-evaluations", job.search.max_evaluations, "Power evaluations before giving up");
}

void add_eiss(CLI::App* cmd, JobConfig& job, Flags& flags) {
  cmd->add_option("--draws", job.draws, "Monte Carlo draws per sampling fraction");
  cmd->add_option("--centering", flags.centering, "nominal-half or exact-power")
      ->check(CLI::IsMember({"nominal-half", "exact-power"}));
  cmd->add_option("--estimator", flags.estimator, "conditional or product")
      ->check(CLI::IsMember({"conditional", "product"}));
}

void resolve(JobConfig& job, const Flags& flags) {
  job.seed = flags.seed ? *flags.seed : default_seed();
  if (!flags.input.empty()) job.input_path = flags.input;
  if (!flags.truth.empty()) job.truth = credibility::parse_family(flags.truth);
  if (job.command == credibility::Command::Power || job.command == credibility::Command::Nstar) {
    job.test.test = credibility::parse_test_kind(flags.test);
  }
  if (flags.null_family == "estimated") {
    job.test.null_spec = credibility::EstimatedNormal{};
  } else {
    job.test.null_spec = credibility::FullySpecified{credibility::parse_family(flags.null_family)};
  }
  job.test.cells = flags.cells;
  if (!flags.scheme.empty()) job.scheme = credibility::parse_scheme(flags.scheme);
  job.search.m_cap = flags.m_cap;
  job.start_hint = flags.start;
  job.c_alpha = flags.c_alpha;
  job.format = flags.format == "csv" ? credibility::OutputFormat::Csv : credibility::OutputFormat::Json;
  job.centering = flags.centering == "exact-power" ? credibility::PowerCentering::ExactPower
                                                   : credibility::PowerCentering::NominalHalf;
  job.estimator = flags.estimator == "product" ? credibility::LocalAltEstimator::Product
                                               : credibility::LocalAltEstimator::Conditional;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model credibility index: the sample size at which a goodness-of-fit test reaches power 1/2"};
  app.require_subcommand(1);

  JobConfig job;
  Flags flags;

  auto* power = app.add_subcommand("power", "Power curve over a grid of sample sizes");
  add_common(power, job, flags);
  add_test(power, job, flags);
  power->add_option("--m", job.m_grid, "Sample sizes, e.g. --m 100,200,400")->delimiter(',')->required();

  auto* nstar = app.add_subcommand("nstar", "Search for N* (or N*_beta)");
  add_common(nstar, job, flags);
  add_test(nstar, job, flags);
  add_search(nstar, job, flags);

  auto* table = app.add_subcommand("table", "Independence model for a contingency table");
  add_common(table, job, flags);
  add_search(table, job, flags);
  table->add_option("--input,-i", flags.input, "CSV grid of counts")->required();
  table->add_option("--scheme", flags.scheme, "bootstrap (default) or subsample");
  table->add_option("--replicates", job.replicates, "Replicates per power check");
  table->add_option("--m", job.m_grid, "Extra power checks at these m")->delimiter(',');
  table->add_option("--ci-replicates", job.ci_replicates, "Bootstrap replicates for the N*_asy interval; 0 skips it");
  table->add_option("--ci-level", job.ci_level, "Interval level");
  table->add_flag("!--no-search", job.run_search, "Skip the resampling search for N*");

  auto* eiss = app.add_subcommand("eiss", "EISS of the subsampling power estimate under local alternatives");
  add_common(eiss, job, flags);
  add_eiss(eiss, job, flags);
  eiss->add_option("--phi-inv", job.phi_inv, "Inverse sampling fractions n/m")->delimiter(',')->required();
  eiss->add_option("--d", job.d, "Chi-square degrees of freedom");
  eiss->add_option("--delta", job.delta, "Local noncentrality");
  eiss->add_option("--c-alpha", flags.c_alpha, "Critical value (default: chi-square upper alpha point)");

  auto* simulate = app.add_subcommand("simulate", "Named simulation studies");
  add_common(simulate, job, flags);
  add_search(simulate, job, flags);
  add_eiss(simulate, job, flags);
  simulate->add_option("--preset", job.preset, "normal-vs-logistic-1s, normal-vs-logistic-2s, table4 or table5")
      ->required()
      ->check(CLI::IsMember(credibility::simulation_presets()));
  simulate->add_option("--replicates", job.replicates, "Replicates per power point or per dataset");
  simulate->add_option("--m", job.m_grid, "Power-curve grid for the normal-vs-logistic presets")->delimiter(',');
  simulate->add_option("--phi-inv", job.phi_inv, "Sampling fractions for table5")->delimiter(',');
  simulate->add_option("--datasets", job.datasets, "Datasets for table4");
  simulate->add_option("--n", job.n, "Dataset size for table4");
  simulate->add_option("--sub-m", job.m, "Resample size for table4");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*power) job.command = credibility::Command::Power;
  if (*nstar) job.command = credibility::Command::Nstar;
  if (*table) job.command = credibility::Command::Table;
  if (*eiss) job.command = credibility::Command::Eiss;
  if (*simulate) {
    job.command = credibility::Command::Simulate;
    if (job.preset == "table4" && simulate->count("--replicates") == 0) job.replicates = 200;
  }

  try {
    resolve(job, flags);
    const auto result = credibility::run(job);
    std::string text;
    if (job.format == credibility::OutputFormat::Csv) {
      if (!result.csv) throw credibility::InputError("this command has no CSV output; use --format json");
      text = *result.csv;
    } else {
      text = result.report.dump(2) + "\n";
    }
    if (flags.output.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(flags.output, std::ios::binary);
      if (!out) throw credibility::InputError("cannot write " + flags.output);
      out << text;
    }
    return result.status;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return credibility::exit_code_for(e);
  }
}
