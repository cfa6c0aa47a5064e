#include "pacbayes/coverage.hpp"

#include <gtest/gtest.h>

#include "pacbayes/errors.hpp"

namespace pacbayes {
namespace {

TEST(Holdout, NoiselessLabelsAgreeWithSeparator) {
  const Holdout holdout(2000, 3, {1.0, 0.5}, 20, 1);
  EXPECT_EQ(holdout.size(), 2000u);
  const Hypothesis h_star{pi_digits(3)};
  EXPECT_EQ(holdout.error_of(h_star, 0), 0.0);
  // half of the positive labels are flipped to 0
  EXPECT_NEAR(holdout.error_of(h_star, 1), 0.25, 0.05);
}

TEST(Holdout, GibbsRiskApproachesPointErrorAsVarianceShrinks) {
  const Holdout holdout(2000, 3, {0.9}, 20, 2);
  const Hypothesis h{Eigen::Vector3d(1.0, 0.5, -0.2)};
  EXPECT_NEAR(holdout.gibbs_risk(IsotropicGaussian{h.weights, 1e-20}, 0), holdout.error_of(h, 0),
              1e-12);
  const double wide = holdout.gibbs_risk(IsotropicGaussian{h.weights, 100.0}, 0);
  EXPECT_GT(wide, holdout.error_of(h, 0));
}

TEST(MeanBoundCoverage, CoversAtNominalLevel) {
  const RateCount r = mean_bound_coverage(300, 100, {0.1, 0.5, 0.9}, 0.05, 3);
  EXPECT_EQ(r.trials, 300u);
  EXPECT_GE(r.rate(), 0.95);
}

TEST(RunCoverage, SmallStudy) {
  CoverageConfig config;
  config.runs = 8;
  config.n = 128;
  config.d = 3;
  config.holdout_size = 5000;
  config.mean_trials = 50;
  config.experiment.mc_samples = 100;
  config.seed = 4;
  const CoverageResult r = run_coverage(config);
  ASSERT_EQ(r.bounds.size(), config.experiment.bounds.size());
  for (const BoundCoverage& b : r.bounds) {
    EXPECT_EQ(b.runs, 8u);
    EXPECT_GE(b.mean_value, b.mean_holdout_risk) << to_string(b.kind);
  }
  EXPECT_EQ(r.lemma2.trials, 8u);
  EXPECT_EQ(r.mean_bound.trials, 50u);
}

TEST(RunCoverage, RejectsZeroRuns) {
  CoverageConfig config;
  config.runs = 0;
  EXPECT_THROW(run_coverage(config), DomainError);
}

}  // namespace
}  // namespace pacbayes
