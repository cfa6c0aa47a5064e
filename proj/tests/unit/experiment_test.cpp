#include "pacbayes/experiment.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "pacbayes/errors.hpp"
#include "pacbayes/report.hpp"
#include "pacbayes/seeds.hpp"

namespace pacbayes {
namespace {

class CountingTestSet : public TestSet {
 public:
  explicit CountingTestSet(const Dataset& data) : inner_(data) {}
  double error_of(const Hypothesis& h) const override {
    ++calls;
    return inner_.error_of(h);
  }
  mutable int calls = 0;

 private:
  DatasetTestSet inner_;
};

Dataset synthetic(std::size_t n, std::size_t d, double keep, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.n = n;
  spec.d = d;
  spec.keep_prob = keep;
  spec.seed = seed;
  return gen_synthetic(spec);
}

ExperimentConfig fast_config() {
  ExperimentConfig c;
  c.mc_samples = 200;
  c.runs = 2;
  c.master_seed = 7;
  c.synthetic_test_size = 2000;
  return c;
}

TEST(SigmaGrid, SizeAndValues) {
  EXPECT_EQ(sigma_grid_size(2), 1u);
  EXPECT_EQ(sigma_grid_size(400), 9u);
  EXPECT_EQ(sigma_grid_size(512), 9u);
  EXPECT_EQ(sigma_grid_size(513), 10u);
  const auto grid = sigma_grid(400);
  ASSERT_EQ(grid.size(), 9u);
  EXPECT_EQ(grid.front(), 0.5);
  EXPECT_EQ(grid.back(), 1.0 / 512.0);
}

TEST(ExperimentConfig, Validation) {
  ExperimentConfig c;
  EXPECT_NO_THROW(c.validate());
  c.delta = 1.5;
  EXPECT_THROW(c.validate(), DomainError);
  c = ExperimentConfig{};
  c.mc_samples = 0;
  EXPECT_THROW(c.validate(), DomainError);
  c = ExperimentConfig{};
  c.bounds = {BoundKind::main, BoundKind::main};
  EXPECT_THROW(c.validate(), DomainError);
  c = ExperimentConfig{};
  c.bounds = {BoundKind::maurer};
  EXPECT_TRUE(c.enabled(BoundKind::maurer));
  EXPECT_FALSE(c.enabled(BoundKind::main));
}

TEST(Names, RoundTrip) {
  for (BoundKind k : all_bound_kinds()) EXPECT_EQ(parse_bound_kind(to_string(k)), k);
  EXPECT_EQ(parse_prior_mode(to_string(PriorMode::uninformed)), PriorMode::uninformed);
  EXPECT_THROW(parse_bound_kind("catoni"), DomainError);
  EXPECT_THROW(parse_prior_mode("flat"), DomainError);
}

TEST(Seeds, DistinctAcrossPurposeRunAndSize) {
  std::set<std::uint64_t> seen;
  for (std::size_t n : {800u, 2000u, 8000u}) {
    for (std::size_t run = 0; run < 10; ++run) {
      for (SeedPurpose p : {SeedPurpose::data, SeedPurpose::test_data, SeedPurpose::monte_carlo,
                            SeedPurpose::folds, SeedPurpose::training}) {
        seen.insert(derive_seed(1, n, run, p));
      }
    }
  }
  EXPECT_EQ(seen.size(), 3u * 10u * 5u);
  EXPECT_EQ(derive_seed(1, 800, 3, SeedPurpose::data), derive_seed(1, 800, 3, SeedPurpose::data));
  EXPECT_NE(derive_seed(1, 800, 3, SeedPurpose::data), derive_seed(2, 800, 3, SeedPurpose::data));
}

TEST(RunExperiment, NoiselessTwoDimensional) {
  const Dataset train = synthetic(400, 2, 1.0, 1);
  const Dataset test = synthetic(5000, 2, 1.0, 2);
  const ExperimentConfig config = fast_config();
  const BoundReport r = run_experiment(train, DatasetTestSet(test), config);
  EXPECT_EQ(r.n, 400u);
  EXPECT_EQ(r.d, 2u);
  EXPECT_LT(r.test_error, 0.03);
  EXPECT_EQ(r.sigma_grid_size, 9u);
  EXPECT_DOUBLE_EQ(r.effective_delta, 0.05 / 9.0);
  ASSERT_EQ(r.bounds.size(), all_bound_kinds().size());
  for (const BoundEntry& e : r.bounds) {
    EXPECT_GE(e.value, e.empirical_loss) << to_string(e.kind);
    EXPECT_GT(e.sigma2, 0.0);
    EXPECT_LE(e.value, 1.0) << to_string(e.kind);
  }
  const BoundEntry* main = r.find(BoundKind::main);
  ASSERT_NE(main, nullptr);
  ASSERT_TRUE(main->main.has_value());
  EXPECT_DOUBLE_EQ(main->main->delta, r.effective_delta);
  EXPECT_EQ(r.empirical_loss, main->empirical_loss);
  EXPECT_TRUE(r.find(BoundKind::thm3)->thm3.has_value());
}

TEST(RunExperiment, ChosenVarianceMinimizesOverGrid) {
  const Dataset train = synthetic(300, 3, 0.9, 3);
  const Dataset test = synthetic(500, 3, 0.9, 4);
  ExperimentConfig config = fast_config();
  config.bounds = {BoundKind::main};
  const ExperimentOutcome out = run_experiment_detailed(train, DatasetTestSet(test), config);
  const BoundEntry& chosen = out.report.bounds.front();

  const std::size_t n = out.report.n;
  const std::size_t m = n / 2;
  const Eigen::VectorXd ref = cross_fitted_losses(out.first_half, out.second_half,
                                                  train.features, train.labels, m);
  const PosteriorSampler sampler(train.features, train.labels,
                                 McConfig{config.mc_samples, out.report.seeds.monte_carlo});
  const EtaGrid grid = build_eta_grid(n, out.report.effective_delta, 1.0);
  for (double sigma2 : sigma_grid(n)) {
    const IsotropicGaussian post{out.full.weights, sigma2};
    const PosteriorStats s = sampler.evaluate(post, m, ref);
    const double comp = comp_informed(post, IsotropicGaussian{out.first_half.weights, sigma2},
                                      IsotropicGaussian{out.second_half.weights, sigma2});
    const double value =
        main_bound(s.empirical_loss, s.v_n, vn_prime(ref, m), comp, n, out.report.effective_delta, grid).total;
    EXPECT_GE(value, chosen.value);
    if (sigma2 == chosen.sigma2) EXPECT_EQ(value, chosen.value);
  }
}

TEST(RunExperiment, UninformedComplexityIsTwiceKlToPrior) {
  const Dataset train = synthetic(200, 3, 0.9, 5);
  const Dataset test = synthetic(200, 3, 0.9, 6);
  ExperimentConfig config = fast_config();
  config.prior_mode = PriorMode::uninformed;
  const ExperimentOutcome out = run_experiment_detailed(train, DatasetTestSet(test), config);
  const BoundEntry* main = out.report.find(BoundKind::main);
  const BoundEntry* maurer = out.report.find(BoundKind::maurer);
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(3);
  EXPECT_NEAR(main->comp_n,
              2.0 * gaussian_kl(out.full.weights, main->sigma2, origin, config.prior_variance), 1e-12);
  EXPECT_NEAR(maurer->comp_n,
              gaussian_kl(out.full.weights, maurer->sigma2, origin, config.prior_variance), 1e-12);
}

TEST(RunExperiment, TestSetIsTouchedOnceAndDoesNotAffectBounds) {
  const Dataset train = synthetic(200, 3, 0.9, 7);
  Dataset test = synthetic(300, 3, 0.9, 8);
  const ExperimentConfig config = fast_config();
  CountingTestSet counting(test);
  const BoundReport a = run_experiment(train, counting, config);
  EXPECT_EQ(counting.calls, 1);

  test.labels = (1.0 - test.labels.array()).matrix();
  const BoundReport b = run_experiment(train, DatasetTestSet(test), config);
  EXPECT_NE(a.test_error, b.test_error);
  ASSERT_EQ(a.bounds.size(), b.bounds.size());
  for (std::size_t k = 0; k < a.bounds.size(); ++k) {
    EXPECT_EQ(a.bounds[k].value, b.bounds[k].value);
    EXPECT_EQ(a.bounds[k].sigma2, b.bounds[k].sigma2);
  }
}

TEST(RunExperiment, OddSampleDropsLastRow) {
  const Dataset train = synthetic(201, 2, 0.9, 9);
  const BoundReport r = run_experiment(train, DatasetTestSet(train), fast_config());
  EXPECT_EQ(r.n, 200u);
  EXPECT_TRUE(r.dropped_last_row);
}

TEST(RunExperiment, RejectsTinySamples) {
  const Dataset train = synthetic(15, 2, 0.9, 9);
  EXPECT_THROW(run_experiment(train, DatasetTestSet(train), fast_config()), DomainError);
}

TEST(RunSweep, ByteIdenticalReports) {
  SyntheticSpec spec;
  spec.d = 3;
  const ExperimentConfig config = fast_config();
  std::ostringstream a, b;
  write_json(run_sweep(spec, {100, 200}, config), a);
  write_json(run_sweep(spec, {100, 200}, config), b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().find("wall_time"), std::string::npos);
}

TEST(RunSweep, RunsUseDistinctSeeds) {
  SyntheticSpec spec;
  spec.d = 3;
  const auto reports = run_sweep(spec, {100}, fast_config());
  ASSERT_EQ(reports.size(), 2u);
  EXPECT_NE(reports[0].seeds.data, reports[1].seeds.data);
  EXPECT_NE(reports[0].seeds.monte_carlo, reports[1].seeds.monte_carlo);
  EXPECT_NE(reports[0].seeds.data, reports[0].seeds.monte_carlo);
}

TEST(RunFolds, FiveFoldsCoverTheData) {
  Dataset data = synthetic(250, 3, 0.9, 10);
  data.name = "toy";
  const auto reports = run_folds(data, fast_config());
  ASSERT_EQ(reports.size(), 5u);
  for (std::size_t k = 0; k < 5; ++k) {
    EXPECT_EQ(reports[k].run, k);
    EXPECT_EQ(reports[k].n, 200u);
    EXPECT_EQ(reports[k].dataset, "toy");
  }
}

TEST(Summaries, MeanStderr) {
  const MeanStderr s = mean_stderr({1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_NEAR(s.std_error, std::sqrt((5.0 / 3.0) / 4.0), 1e-15);
  EXPECT_EQ(s.count, 4u);
  EXPECT_EQ(mean_stderr({}).count, 0u);
  EXPECT_EQ(mean_stderr({3.0}).std_error, 0.0);
}

TEST(Summaries, GroupsByDatasetSizeAndBound) {
  SyntheticSpec spec;
  spec.d = 2;
  const auto reports = run_sweep(spec, {64, 128}, fast_config());
  const auto rows = summarize(reports);
  ASSERT_EQ(rows.size(), 2u * all_bound_kinds().size());
  EXPECT_EQ(rows.front().n, 64u);
  EXPECT_EQ(rows.front().value.count, 2u);
  EXPECT_EQ(rows.back().n, 128u);
}

}  // namespace
}  // namespace pacbayes
