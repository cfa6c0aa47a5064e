#pragma once

#include <cstdint>
#include <vector>

#include "pacbayes/experiment.hpp"
#include "pacbayes/posteriors.hpp"

namespace pacbayes {

struct CoverageConfig {
  std::size_t runs = 200;
  std::size_t n = 200;
  std::size_t d = 5;
  // Label keep probabilities, cycled over runs (1 is noiseless).
  std::vector<double> keep_probs = {1.0, 0.95, 0.9, 0.8};
  std::size_t holdout_size = 100000;
  // Posterior draws used to estimate a Gibbs risk on the holdout.
  std::size_t holdout_posterior_samples = 50;
  ExperimentConfig experiment;
  std::size_t mean_trials = 1000;
  std::size_t mean_sample_size = 100;
  std::vector<double> mean_probabilities = {0.05, 0.2, 0.5, 0.8, 0.95};
  std::uint64_t seed = 0;
};

struct BoundCoverage {
  BoundKind kind = BoundKind::main;
  std::size_t covered = 0;
  std::size_t runs = 0;
  double mean_value = 0.0;
  double mean_holdout_risk = 0.0;

  [[nodiscard]] double rate() const {
    return runs == 0 ? 0.0 : static_cast<double>(covered) / static_cast<double>(runs);
  }
};

struct RateCount {
  std::size_t hits = 0;
  std::size_t trials = 0;

  [[nodiscard]] double rate() const {
    return trials == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(trials);
  }
};

struct CoverageResult {
  std::vector<BoundCoverage> bounds;
  RateCount lemma2;
  RateCount mean_bound;
};

/// Fixed holdout features with one label vector per keep probability, and a
/// shared set of posterior draws projected onto the features.
class Holdout {
 public:
  Holdout(std::size_t size, std::size_t d, const std::vector<double>& keep_probs,
          std::size_t posterior_samples, std::uint64_t seed);

  /// 0-1 error of h against the labels of keep_probs[config].
  [[nodiscard]] double error_of(const Hypothesis& h, std::size_t config) const;
  /// Monte Carlo Gibbs risk of N(mean, variance I) against the labels of
  /// keep_probs[config].
  [[nodiscard]] double gibbs_risk(const IsotropicGaussian& posterior, std::size_t config) const;

  [[nodiscard]] std::size_t size() const noexcept {
    return static_cast<std::size_t>(features_.rows());
  }

 private:
  Eigen::MatrixXd features_;
  std::vector<Eigen::VectorXd> labels_;
  Eigen::MatrixXd projections_;  // posterior_samples x size
};

/// Fraction of trials in which p - mean(sample) <= empirical_bernstein_mean_bound
/// for Bernoulli(p) samples.
RateCount mean_bound_coverage(std::size_t trials, std::size_t sample_size,
                              const std::vector<double>& probabilities, double delta,
                              std::uint64_t seed);

/// Synthetic coverage study: each run draws a fresh training sample, runs the
/// experiment, and compares every bound with the holdout Gibbs risk of its
/// chosen posterior and the irreducible-term bound with holdout risks of the
/// half-sample estimators.
CoverageResult run_coverage(const CoverageConfig& config);

}  // namespace pacbayes
