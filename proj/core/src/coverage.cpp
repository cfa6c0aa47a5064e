#include "pacbayes/coverage.hpp"

#include <cmath>
#include <random>

#include <spdlog/spdlog.h>

#include "pacbayes/errors.hpp"
#include "pacbayes/esi_verify.hpp"
#include "pacbayes/seeds.hpp"

namespace pacbayes {
namespace {

class HoldoutTestSet : public TestSet {
 public:
  HoldoutTestSet(const Holdout& holdout, std::size_t config) : holdout_(holdout), config_(config) {}
  [[nodiscard]] double error_of(const Hypothesis& h) const override {
    return holdout_.error_of(h, config_);
  }

 private:
  const Holdout& holdout_;
  std::size_t config_;
};

}  // namespace

Holdout::Holdout(std::size_t size, std::size_t d, const std::vector<double>& keep_probs,
                 std::size_t posterior_samples, std::uint64_t seed) {
  if (size == 0 || posterior_samples == 0) throw DomainError("Holdout: empty holdout");
  SyntheticSpec spec;
  spec.d = d;
  spec.n = size;
  spec.keep_prob = 1.0;
  spec.seed = seed;
  const Dataset clean = gen_synthetic(spec);
  features_ = clean.features;

  std::mt19937_64 rng(splitmix64(seed ^ 0x5eedULL));
  for (double keep : keep_probs) {
    std::bernoulli_distribution kept(keep);
    Eigen::VectorXd labels = clean.labels;
    for (Eigen::Index i = 0; i < labels.size(); ++i) {
      if (!kept(rng)) labels[i] = 0.0;
    }
    labels_.push_back(std::move(labels));
  }
  projections_ = standard_normal_draws(posterior_samples, d, splitmix64(seed)) * features_.transpose();
}

double Holdout::error_of(const Hypothesis& h, std::size_t config) const {
  return empirical_error(h, features_, labels_.at(config));
}

double Holdout::gibbs_risk(const IsotropicGaussian& posterior, std::size_t config) const {
  posterior.validate();
  const Eigen::VectorXd& labels = labels_.at(config);
  const Eigen::VectorXd center = features_ * posterior.mean;
  const double sigma = std::sqrt(posterior.variance);
  double errors = 0.0;
  for (Eigen::Index s = 0; s < projections_.rows(); ++s) {
    for (Eigen::Index i = 0; i < projections_.cols(); ++i) {
      const bool predicted = center[i] + sigma * projections_(s, i) > 0.0;
      errors += (predicted ? 1.0 : 0.0) != labels[i] ? 1.0 : 0.0;
    }
  }
  return errors / static_cast<double>(projections_.size());
}

RateCount mean_bound_coverage(std::size_t trials, std::size_t sample_size,
                              const std::vector<double>& probabilities, double delta,
                              std::uint64_t seed) {
  if (probabilities.empty()) throw DomainError("mean_bound_coverage: no probabilities");
  std::mt19937_64 rng(seed);
  RateCount out;
  std::vector<double> sample(sample_size);
  for (std::size_t t = 0; t < trials; ++t) {
    const double p = probabilities[t % probabilities.size()];
    std::bernoulli_distribution draw(p);
    double sum = 0.0;
    for (double& z : sample) {
      z = draw(rng) ? 1.0 : 0.0;
      sum += z;
    }
    const double deviation = p - sum / static_cast<double>(sample_size);
    ++out.trials;
    if (deviation <= esi::empirical_bernstein_mean_bound(sample, delta)) ++out.hits;
  }
  return out;
}

CoverageResult run_coverage(const CoverageConfig& config) {
  config.experiment.validate();
  if (config.keep_probs.empty()) throw DomainError("run_coverage: no keep probabilities");
  if (config.runs == 0) throw DomainError("run_coverage: runs must be positive");
  const Holdout holdout(config.holdout_size, config.d, config.keep_probs,
                        config.holdout_posterior_samples,
                        derive_seed(config.seed, config.holdout_size, 0, SeedPurpose::holdout));

  CoverageResult result;
  for (BoundKind kind : config.experiment.bounds) result.bounds.push_back(BoundCoverage{kind});

  ExperimentConfig experiment = config.experiment;
  for (std::size_t run = 0; run < config.runs; ++run) {
    const std::size_t which = run % config.keep_probs.size();
    SyntheticSpec spec;
    spec.d = config.d;
    spec.n = config.n;
    spec.keep_prob = config.keep_probs[which];
    spec.seed = derive_seed(config.seed, config.n, run, SeedPurpose::data);
    const Dataset train = gen_synthetic(spec);
    experiment.master_seed = derive_seed(config.seed, config.n, run, SeedPurpose::monte_carlo);

    const ExperimentOutcome outcome =
        run_experiment_detailed(train, HoldoutTestSet(holdout, which), experiment, run);
    const BoundReport& report = outcome.report;

    for (auto& cov : result.bounds) {
      const BoundEntry* entry = report.find(cov.kind);
      const double risk = holdout.gibbs_risk(IsotropicGaussian{outcome.full.weights, entry->sigma2}, which);
      ++cov.runs;
      if (entry->value >= risk) ++cov.covered;
      cov.mean_value += entry->value;
      cov.mean_holdout_risk += risk;
    }

    const double rhs = lemma2_rhs(holdout.error_of(outcome.second_half, which),
                                  holdout.error_of(outcome.first_half, which), report.n,
                                  experiment.delta);
    ++result.lemma2.trials;
    if (std::sqrt(report.v_n_prime / static_cast<double>(report.n)) <= rhs) ++result.lemma2.hits;
    if ((run + 1) % 50 == 0) spdlog::info("coverage: {}/{} runs", run + 1, config.runs);
  }
  for (auto& cov : result.bounds) {
    cov.mean_value /= static_cast<double>(cov.runs);
    cov.mean_holdout_risk /= static_cast<double>(cov.runs);
  }

  result.mean_bound = mean_bound_coverage(config.mean_trials, config.mean_sample_size,
                                          config.mean_probabilities, config.experiment.delta,
                                          derive_seed(config.seed, config.mean_sample_size, 0,
                                                      SeedPurpose::holdout_monte_carlo));
  return result;
}

}  // namespace pacbayes
