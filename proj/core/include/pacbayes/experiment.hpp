#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pacbayes/bounds.hpp"
#include "pacbayes/datasets.hpp"
#include "pacbayes/learners.hpp"

namespace pacbayes {

enum class BoundKind { main, maurer, maurer_informed, thm3 };
enum class PriorMode { informed, uninformed };

std::string_view to_string(BoundKind kind);
std::string_view to_string(PriorMode mode);
/// Throws DomainError on an unknown name.
BoundKind parse_bound_kind(std::string_view name);
PriorMode parse_prior_mode(std::string_view name);

inline const std::vector<BoundKind>& all_bound_kinds() {
  static const std::vector<BoundKind> kinds = {BoundKind::main, BoundKind::maurer,
                                               BoundKind::maurer_informed, BoundKind::thm3};
  return kinds;
}

struct ExperimentConfig {
  double delta = 0.05;
  double lambda = 0.01;
  double prior_variance = 0.5;  // sigma_0^2 of the data-free prior N(0, sigma_0^2 I)
  std::size_t mc_samples = 1000;
  std::size_t runs = 10;
  std::uint64_t master_seed = 0;
  std::vector<BoundKind> bounds = all_bound_kinds();
  PriorMode prior_mode = PriorMode::informed;
  int max_iters = 500;
  double grad_tolerance = 1e-6;
  std::size_t synthetic_test_size = 10000;
  bool record_timing = false;

  /// Throws DomainError when a field is out of range.
  void validate() const;
  [[nodiscard]] bool enabled(BoundKind kind) const;
};

/// J = ceil(log2 n): the number of posterior variances scanned.
std::size_t sigma_grid_size(std::size_t n);

/// {1/2, 1/4, ..., 1/2^J}.
std::vector<double> sigma_grid(std::size_t n);

struct BoundEntry {
  BoundKind kind = BoundKind::main;
  double value = 0.0;  // unclamped
  double sigma2 = 0.0;
  double empirical_loss = 0.0;
  double v_n = 0.0;
  double v_n_prime = 0.0;
  double comp_n = 0.0;  // the complexity term the bound used
  double eta_star = 0.0;  // 0 for the kl-inversion bounds
  double nu_star = 0.0;
  std::optional<BoundComponents> main;
  std::optional<Thm3Components> thm3;
};

struct RunSeeds {
  std::uint64_t data = 0;
  std::uint64_t monte_carlo = 0;
};

struct BoundReport {
  std::string dataset;
  std::size_t n = 0;  // training rows used (even)
  std::size_t d = 0;
  std::size_t run = 0;
  bool dropped_last_row = false;
  ExperimentConfig config;
  std::size_t sigma_grid_size = 0;
  double effective_delta = 0.0;
  double test_error = 0.0;
  // Reported at the variance chosen by the main bound when it is enabled,
  // otherwise at the variance chosen by the first enabled bound.
  double empirical_loss = 0.0;
  double v_n = 0.0;
  double v_n_prime = 0.0;
  double g_n_prime = 0.0;
  std::vector<BoundEntry> bounds;
  RunSeeds seeds;
  std::string beta_form = "eta + eta^2 m/(2m-2)";
  std::string feature_scaling = "global";
  std::optional<double> wall_time_seconds;

  [[nodiscard]] const BoundEntry* find(BoundKind kind) const;
};

/// Held-out data the experiment may query exactly once, for the test error of
/// the full-sample estimator.
class TestSet {
 public:
  virtual ~TestSet() = default;
  [[nodiscard]] virtual double error_of(const Hypothesis& h) const = 0;
};

class DatasetTestSet : public TestSet {
 public:
  explicit DatasetTestSet(const Dataset& data) : data_(data) {}
  [[nodiscard]] double error_of(const Hypothesis& h) const override;

 private:
  const Dataset& data_;
};

/// The report plus the three trained estimators.
struct ExperimentOutcome {
  BoundReport report;
  Hypothesis full;
  Hypothesis first_half;
  Hypothesis second_half;
};

/// Trains the three estimators on `train`, scans the variance grid for every
/// enabled bound at delta / J, and evaluates the full-sample estimator on
/// `test`. The Monte Carlo seed is derived from (master_seed, n, run).
/// Requires at least 16 training rows.
ExperimentOutcome run_experiment_detailed(const Dataset& train, const TestSet& test,
                                          const ExperimentConfig& config, std::size_t run = 0);

BoundReport run_experiment(const Dataset& train, const TestSet& test,
                           const ExperimentConfig& config, std::size_t run = 0);

/// One run per (n, run) on freshly generated synthetic data, with a fresh
/// test sample of config.synthetic_test_size rows.
std::vector<BoundReport> run_sweep(const SyntheticSpec& spec, const std::vector<std::size_t>& sizes,
                                   const ExperimentConfig& config);

/// Five-fold evaluation: each fold is held out once.
std::vector<BoundReport> run_folds(const Dataset& data, const ExperimentConfig& config);

struct MeanStderr {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;
};

MeanStderr mean_stderr(const std::vector<double>& values);

struct SweepSummaryRow {
  std::string dataset;
  std::size_t n = 0;
  BoundKind kind = BoundKind::main;
  MeanStderr value;
  MeanStderr test_error;
  MeanStderr empirical_loss;
  MeanStderr v_n;
  MeanStderr v_n_prime;
};

/// Per (dataset, n, bound) means and standard errors, in order of first
/// appearance.
std::vector<SweepSummaryRow> summarize(const std::vector<BoundReport>& reports);

}  // namespace pacbayes
