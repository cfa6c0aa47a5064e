#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "pacbayes/coverage.hpp"
#include "pacbayes/datasets.hpp"
#include "pacbayes/errors.hpp"
#include "pacbayes/esi_verify.hpp"
#include "pacbayes/experiment.hpp"
#include "pacbayes/report.hpp"

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;
constexpr int kNumericError = 3;

struct CommonOptions {
  double delta = 0.05;
  double lambda = 0.01;
  double prior_variance = 0.5;
  std::size_t mc_samples = 1000;
  std::size_t runs = 10;
  std::uint64_t seed = 0;
  std::vector<std::string> bounds = {"main", "maurer", "maurer_informed", "thm3"};
  std::string prior_mode = "informed";
  std::string format = "json";
  std::string out;
  bool timing = false;
  bool verbose = false;
};

// Thrown for option values that parse but are out of range.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

pacbayes::ExperimentConfig make_config(const CommonOptions& o) {
  pacbayes::ExperimentConfig c;
  c.delta = o.delta;
  c.lambda = o.lambda;
  c.prior_variance = o.prior_variance;
  c.mc_samples = o.mc_samples;
  c.runs = o.runs;
  c.master_seed = o.seed;
  c.record_timing = o.timing;
  try {
    c.bounds.clear();
    for (const auto& name : o.bounds) c.bounds.push_back(pacbayes::parse_bound_kind(name));
    c.prior_mode = pacbayes::parse_prior_mode(o.prior_mode);
    c.validate();
  } catch (const pacbayes::DomainError& e) {
    throw UsageError(e.what());
  }
  return c;
}

pacbayes::ReportFormat make_format(const CommonOptions& o) {
  try {
    return pacbayes::parse_report_format(o.format);
  } catch (const pacbayes::DomainError& e) {
    throw UsageError(e.what());
  }
}

void print_summary(const std::vector<pacbayes::BoundReport>& reports, std::FILE* sink) {
  fmt::print(sink, "{:<24} {:>6} {:<16} {:>10} {:>9} {:>10} {:>9} {:>9} {:>9}\n", "dataset", "n",
             "bound", "value", "+-", "test_err", "L_n", "V_n", "V'_n");
  for (const auto& row : pacbayes::summarize(reports)) {
    fmt::print(sink, "{:<24} {:>6} {:<16} {:>10.5f} {:>9.5f} {:>10.5f} {:>9.5f} {:>9.5f} {:>9.5f}\n",
               row.dataset, row.n, pacbayes::to_string(row.kind), row.value.mean,
               row.value.std_error, row.test_error.mean, row.empirical_loss.mean, row.v_n.mean,
               row.v_n_prime.mean);
  }
}

void emit(const std::vector<pacbayes::BoundReport>& reports, const CommonOptions& o) {
  const auto format = make_format(o);
  if (o.out.empty()) {
    pacbayes::emit_report(reports, format, std::cout);
    return;
  }
  pacbayes::emit_report(reports, format, std::filesystem::path(o.out));
  print_summary(reports, stdout);
  spdlog::info("wrote {} report(s) to {}", reports.size(), o.out);
}

std::vector<double> read_column(const std::string& path, const std::string& column) {
  std::ifstream in(path);
  if (!in) throw pacbayes::DataError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw pacbayes::DataError("empty file " + path);
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  std::size_t index = 0;
  if (!column.empty()) {
    const auto it = std::find(header.begin(), header.end(), column);
    if (it == header.end()) throw pacbayes::DataError("no column '" + column + "' in " + path);
    index = static_cast<std::size_t>(it - header.begin());
  }
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    for (std::size_t i = 0; i <= index; ++i) {
      if (!std::getline(ss, cell, ',')) throw pacbayes::DataError("short row in " + path);
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      throw pacbayes::DataError("non-numeric value '" + cell + "' in " + path);
    }
    if (!(v >= 0.0 && v <= 1.0)) throw pacbayes::DataError("value outside [0, 1]: " + cell);
    values.push_back(v);
  }
  if (values.empty()) throw pacbayes::DataError("no values in " + path);
  return values;
}

std::vector<std::size_t> parse_sizes(const std::vector<std::size_t>& sizes) {
  for (std::size_t n : sizes) {
    if (n < 16) throw UsageError("sample sizes must be at least 16");
  }
  return sizes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PAC-Bayes bound computation and verification"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML/INI file with option values; flags override it");

  CommonOptions o;
  app.add_option("--delta", o.delta, "Confidence parameter")->capture_default_str();
  app.add_option("--lambda", o.lambda, "L2 regularization strength")->capture_default_str();
  app.add_option("--prior-var", o.prior_variance, "Variance of the data-free prior N(0, s I)")
      ->capture_default_str();
  app.add_option("--mc-samples", o.mc_samples, "Monte Carlo draws per posterior")
      ->capture_default_str();
  app.add_option("--runs", o.runs, "Independent runs per sample size")->capture_default_str();
  app.add_option("--seed", o.seed, "Master seed")->capture_default_str();
  app.add_option("--bounds", o.bounds, "Bounds to compute: main,maurer,maurer_informed,thm3")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--prior-mode", o.prior_mode, "informed or uninformed")->capture_default_str();
  app.add_option("--format", o.format, "json or csv")->capture_default_str();
  app.add_option("--out", o.out, "Output file (default: stdout)");
  app.add_flag("--timing", o.timing, "Record wall time in reports");
  app.add_flag("-v,--verbose", o.verbose, "Debug logging");

  // synth
  auto* synth = app.add_subcommand("synth", "Sweep over generated linear-separator data");
  std::size_t synth_d = 10;
  double keep_prob = 0.9;
  std::vector<std::size_t> sizes = {800, 2000, 8000};
  std::size_t test_size = 10000;
  synth->add_option("--dim", synth_d, "Input dimension (<= 50)")->capture_default_str();
  synth->add_option("--keep-prob", keep_prob, "Probability a positive label is kept")
      ->capture_default_str();
  synth->add_option("--sizes", sizes, "Training sample sizes")->delimiter(',')->capture_default_str();
  synth->add_option("--test-size", test_size, "Rows in each fresh test sample")->capture_default_str();

  // uci
  auto* uci = app.add_subcommand("uci", "Five-fold evaluation on a CSV dataset");
  std::string csv_path;
  std::string label_column;
  std::vector<std::string> categorical;
  uci->add_option("csv", csv_path, "CSV file with a header row")->required();
  uci->add_option("--label", label_column, "Label column name (default: last column)");
  uci->add_option("--categorical", categorical, "Extra columns to one-hot encode")->delimiter(',');

  // verify-esi
  auto* verify = app.add_subcommand("verify-esi", "Run the exact ESI verification suites");
  std::size_t cases = 1000;
  verify->add_option("--cases", cases, "Random distributions per suite")->capture_default_str();

  // mean-bound
  auto* mean = app.add_subcommand("mean-bound", "Empirical Bernstein bound on E[Z] - mean for Z in [0,1]");
  std::string mean_path;
  std::string mean_column;
  mean->add_option("csv", mean_path, "CSV file with a header row")->required();
  mean->add_option("--column", mean_column, "Column name (default: first column)");

  // coverage
  auto* coverage = app.add_subcommand("coverage", "Coverage simulation against a large holdout");
  pacbayes::CoverageConfig cov;
  coverage->add_option("--n", cov.n, "Training sample size")->capture_default_str();
  coverage->add_option("--dim", cov.d, "Input dimension")->capture_default_str();
  coverage->add_option("--holdout", cov.holdout_size, "Holdout rows")->capture_default_str();
  coverage->add_option("--trials", cov.mean_trials, "Mean-bound trials")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  // Reports may go to stdout, so logs go to stderr.
  spdlog::set_default_logger(spdlog::stderr_color_mt("pacbayes"));
  spdlog::set_level(o.verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    if (*synth) {
      const auto config = make_config(o);
      if (synth_d == 0 || synth_d > 50) throw UsageError("--dim must lie in [1, 50]");
      if (!(keep_prob >= 0.0 && keep_prob <= 1.0)) throw UsageError("--keep-prob must lie in [0, 1]");
      pacbayes::ExperimentConfig c = config;
      c.synthetic_test_size = test_size;
      pacbayes::SyntheticSpec spec;
      spec.d = synth_d;
      spec.keep_prob = keep_prob;
      emit(pacbayes::run_sweep(spec, parse_sizes(sizes), c), o);
    } else if (*uci) {
      const auto config = make_config(o);
      pacbayes::CsvOptions opts;
      opts.categorical_columns = categorical;
      if (label_column.empty()) {
        std::ifstream in(csv_path);
        std::string header;
        if (!in || !std::getline(in, header)) throw pacbayes::DataError("cannot read " + csv_path);
        while (!header.empty() && (header.back() == '\r' || header.back() == ' ')) header.pop_back();
        label_column = header.substr(header.find_last_of(',') + 1);
      }
      opts.label_column = label_column;
      pacbayes::CsvSummary summary;
      const auto data = pacbayes::load_csv(csv_path, opts, &summary);
      spdlog::info("{}: {} rows kept of {}, d = {}, label '{}' -> 0, '{}' -> 1", data.name,
                   data.size(), summary.rows_read, data.dim(), summary.negative_label,
                   summary.positive_label);
      emit(pacbayes::run_folds(data, config), o);
    } else if (*verify) {
      namespace esi = pacbayes::esi;
      const std::vector<esi::SuiteResult> suites = {
          esi::unexpected_bernstein_suite(cases, o.seed),
          esi::standard_bernstein_suite(cases, o.seed),
          esi::tightness_suite(),
          esi::chain_suite(200, o.seed),
          esi::pac_bayes_suite(200, o.seed),
          esi::grid_mixture_suite(200, o.seed)};
      bool ok = true;
      fmt::print("{:<24} {:>8} {:>9} {:>14}  {}\n", "suite", "cases", "failures", "worst slack",
                 "verdict");
      for (const auto& s : suites) {
        fmt::print("{:<24} {:>8} {:>9} {:>14.3e}  {}\n", s.name, s.cases, s.failures, s.worst_slack,
                   s.passed() ? "PASS" : "FAIL");
        ok = ok && s.passed();
      }
      return ok ? 0 : kNumericError;
    } else if (*mean) {
      if (!(o.delta > 0.0 && o.delta < 1.0)) throw UsageError("--delta must lie in ]0, 1[");
      const auto values = read_column(mean_path, mean_column);
      double sum = 0.0;
      for (double v : values) sum += v;
      const double avg = sum / static_cast<double>(values.size());
      const double dev = pacbayes::esi::empirical_bernstein_mean_bound(values, o.delta);
      fmt::print("n = {}\nmean = {:.10g}\ndeviation = {:.10g}\nupper bound on E[Z] = {:.10g}\n",
                 values.size(), avg, dev, avg + dev);
    } else if (*coverage) {
      cov.experiment = make_config(o);
      cov.runs = o.runs;
      cov.seed = o.seed;
      const auto result = pacbayes::run_coverage(cov);
      fmt::print("{:<16} {:>8} {:>8} {:>12} {:>14}\n", "bound", "covered", "runs", "mean value",
                 "holdout risk");
      for (const auto& b : result.bounds) {
        fmt::print("{:<16} {:>8} {:>8} {:>12.5f} {:>14.5f}\n", pacbayes::to_string(b.kind),
                   b.covered, b.runs, b.mean_value, b.mean_holdout_risk);
      }
      fmt::print("irreducible-term bound held in {}/{} runs\n", result.lemma2.hits,
                 result.lemma2.trials);
      fmt::print("mean bound covered in {}/{} trials\n", result.mean_bound.hits,
                 result.mean_bound.trials);
    }
  } catch (const UsageError& e) {
    spdlog::error("{}", e.what());
    return kUsageError;
  } catch (const pacbayes::DataError& e) {
    spdlog::error("data error: {}", e.what());
    return kDataError;
  } catch (const std::filesystem::filesystem_error& e) {
    spdlog::error("data error: {}", e.what());
    return kDataError;
  } catch (const std::exception& e) {
    spdlog::error("numeric failure: {}", e.what());
    return kNumericError;
  }
  return 0;
}
