#include "pacbayes/esi_verify.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "pacbayes/errors.hpp"
#include "property.hpp"

namespace pacbayes::esi {
namespace {

using pacbayes::testing::for_all;
using pacbayes::testing::uniform;

DiscreteDistribution bernoulli_half() { return DiscreteDistribution::two_point(0.0, 1.0, 0.5); }

TEST(DiscreteDistribution, Moments) {
  const DiscreteDistribution d({{-1.0, 0.25}, {2.0, 0.75}});
  EXPECT_DOUBLE_EQ(d.mean(), 1.25);
  EXPECT_DOUBLE_EQ(d.second_moment(), 0.25 + 3.0);
  EXPECT_EQ(d.min_value(), -1.0);
  EXPECT_EQ(d.max_value(), 2.0);
}

TEST(DiscreteDistribution, RejectsInvalidInput) {
  EXPECT_THROW(DiscreteDistribution({}), DomainError);
  EXPECT_THROW(DiscreteDistribution({{0.0, 0.5}, {1.0, 0.4}}), DomainError);
  EXPECT_THROW(DiscreteDistribution({{0.0, -0.5}, {1.0, 1.5}}), DomainError);
  EXPECT_THROW(DiscreteDistribution({{std::numeric_limits<double>::infinity(), 1.0}}),
               DomainError);
}

TEST(EsiMgf, PointMassAtZero) {
  const auto r = esi_mgf(DiscreteDistribution::point_mass(0.0), 0.7,
                         [](double x, double mean, double) { return mean - x; });
  EXPECT_EQ(r.mgf_value, 1.0);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.margin, 0.0);
}

TEST(EsiMgf, BernoulliWithQuadraticPenalty) {
  const double c = c_eta(0.5, 1.0);
  const auto r = esi_mgf(bernoulli_half(), 0.5, unexpected_bernstein_transform(c));
  EXPECT_NEAR(r.mgf_value, 0.96301906251580611, 1e-15);
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.margin, 1.0 - r.mgf_value, 1e-16);
}

TEST(EsiMgf, BernoulliWithoutPenaltyFails) {
  const auto r = esi_mgf(bernoulli_half(), 0.5, unexpected_bernstein_transform(0.0));
  EXPECT_NEAR(r.mgf_value, std::cosh(0.25), 1e-15);
  EXPECT_FALSE(r.holds);
}

TEST(EsiMgf, LogSpaceAvoidsOverflow) {
  // Exponents of 800 and -800: the naive sum overflows but the mean does not.
  const DiscreteDistribution d({{-1.0, 0.5}, {1.0, 0.5}});
  const auto r = esi_mgf(d, 800.0, [](double x, double, double) { return x; });
  EXPECT_TRUE(std::isinf(r.mgf_value) || r.mgf_value > 1e300);
  EXPECT_FALSE(r.holds);
  const auto s = esi_mgf(d, 800.0, [](double x, double, double) { return -std::abs(x); });
  EXPECT_GE(s.mgf_value, 0.0);
  EXPECT_TRUE(s.holds);
}

TEST(UnexpectedBernstein, RequiresEtaBelowInverseMax) {
  const auto d = DiscreteDistribution::two_point(-1.0, 2.0, 0.5);
  EXPECT_THROW(check_unexpected_bernstein(d, 0.5, 0.1), DomainError);
  EXPECT_NO_THROW(check_unexpected_bernstein(d, 0.49, 0.1));
}

TEST(UnexpectedBernstein, PointMassAtZeroIsExactlyOne) {
  const auto r = check_unexpected_bernstein(DiscreteDistribution::point_mass(0.0), 0.9, 0.0);
  EXPECT_EQ(r.mgf_value, 1.0);
  EXPECT_TRUE(r.holds);
}

TEST(UnexpectedBernstein, HoldsAtCEtaOnRandomCorpus) {
  for_all(500, 21, [](std::mt19937_64& rng) {
    const double b = std::array{0.5, 1.0, 2.0}[pacbayes::testing::uniform_index(rng, 0, 2)];
    auto dist = random_distribution(rng, pacbayes::testing::uniform_index(rng, 2, 8), -5.0, b);
    const double eta = uniform(rng, 1e-3, 0.999 / b);
    const auto r = check_unexpected_bernstein(dist, eta, c_eta(eta, b));
    EXPECT_LE(r.mgf_value, 1.0 + kVerdictTolerance);
  });
}

TEST(UnexpectedBernstein, MgfNonincreasingInC) {
  for_all(100, 22, [](std::mt19937_64& rng) {
    auto dist = random_distribution(rng, 5, -5.0, 1.0);
    double prev = std::numeric_limits<double>::infinity();
    for (double c = 0.0; c <= 2.0; c += 0.05) {
      const double mgf = check_unexpected_bernstein(dist, 0.5, c).mgf_value;
      EXPECT_LE(mgf, prev);
      prev = mgf;
    }
  });
}

TEST(StandardBernstein, SymmetricSignWithoutPenaltyFails) {
  const auto d = DiscreteDistribution::two_point(-1.0, 1.0, 0.5);
  const auto r = check_standard_bernstein(d, 0.5, 0.0);
  EXPECT_NEAR(r.mgf_value, 1.1276259652063808, 1e-15);
  EXPECT_FALSE(r.holds);
}

TEST(StandardBernstein, PointMass) {
  const double x = 0.7, eta = 0.4, s = 0.3;
  const auto r = check_standard_bernstein(DiscreteDistribution::point_mass(x), eta, s);
  EXPECT_NEAR(r.mgf_value, std::exp(-eta * s * x * x), 1e-15);
  EXPECT_TRUE(r.holds);
}

TEST(StandardBernstein, HoldsAtSEta) {
  for_all(500, 23, [](std::mt19937_64& rng) {
    auto dist = random_distribution(rng, pacbayes::testing::uniform_index(rng, 2, 8), -5.0, 2.0);
    const double b = std::max(std::abs(dist.min_value()), 1e-9);
    const double eta = uniform(rng, 1e-3, 2.0);
    EXPECT_TRUE(check_standard_bernstein(dist, eta, s_eta(eta, b)).holds);
  });
}

TEST(TightnessWitness, FoundBelowCEta) {
  const double eta = 0.5, b = 1.0;
  const auto w = find_tightness_witness(eta, b, 0.5 * c_eta(eta, b));
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->size(), 2U);
  EXPECT_EQ(w->min_value(), 0.0);
  EXPECT_EQ(w->max_value(), b);
  EXPECT_FALSE(check_unexpected_bernstein(*w, eta, 0.5 * c_eta(eta, b)).holds);
}

TEST(TightnessWitness, NoneAtCEta) {
  for (double b : {0.5, 1.0, 2.0}) {
    for (double u : {0.05, 0.5, 0.9}) {
      EXPECT_FALSE(find_tightness_witness(u / b, b, c_eta(u / b, b)).has_value());
    }
  }
}

TEST(TightnessWitness, FoundWithoutPenalty) {
  EXPECT_TRUE(find_tightness_witness(0.5, 1.0, 0.0).has_value());
}

TEST(Chain, SingleFactorReducesToIndividualCheck) {
  const auto d = DiscreteDistribution::two_point(-2.0, 1.0, 0.3);
  const double gamma = 0.4;
  const Transform t = unexpected_bernstein_transform(c_eta(gamma, 1.0));
  const std::vector<DiscreteDistribution> dists = {d};
  const std::vector<double> gammas = {gamma};
  const std::vector<Transform> ts = {t};
  const auto chained = check_esi_chain(dists, gammas, ts);
  const auto single = esi_mgf(d, gamma, t);
  EXPECT_NEAR(chained.mgf_value, single.mgf_value, 1e-15);
}

TEST(Chain, IdenticalRatesDivideByN) {
  const std::vector<double> gammas(5, 0.3);
  EXPECT_NEAR(chained_rate(gammas), 0.06, 1e-16);
  const std::vector<double> mixed = {0.5, 0.25};
  EXPECT_NEAR(chained_rate(mixed), 1.0 / 6.0, 1e-16);
}

TEST(Chain, RandomTriplesPass) {
  for_all(100, 24, [](std::mt19937_64& rng) {
    std::vector<DiscreteDistribution> dists;
    std::vector<double> gammas;
    std::vector<Transform> ts;
    for (int i = 0; i < 3; ++i) {
      dists.push_back(random_distribution(rng, 2, -1.0, 1.0));
      gammas.push_back(uniform(rng, 0.05, 0.95));
      ts.push_back(unexpected_bernstein_transform(c_eta(gammas.back(), 1.0)));
    }
    EXPECT_TRUE(check_esi_chain(dists, gammas, ts).holds);
  });
}

TEST(Chain, RejectsFailingFactorAndHugeProducts) {
  const auto d = DiscreteDistribution::two_point(0.0, 1.0, 0.5);
  const std::vector<DiscreteDistribution> one = {d};
  const std::vector<double> g = {0.5};
  const std::vector<Transform> bad = {unexpected_bernstein_transform(0.0)};
  EXPECT_THROW(check_esi_chain(one, g, bad), DomainError);

  std::mt19937_64 rng(3);
  std::vector<DiscreteDistribution> wide;
  for (int i = 0; i < 4; ++i) wide.push_back(random_distribution(rng, 40, -1.0, 1.0));
  const std::vector<double> gammas(4, 0.5);
  const std::vector<Transform> shared = {unexpected_bernstein_transform(c_eta(0.5, 1.0))};
  EXPECT_THROW(check_esi_chain(wide, gammas, shared), DomainError);
}

TEST(PacBayes, PosteriorEqualPriorHolds) {
  std::mt19937_64 rng(5);
  std::vector<DiscreteDistribution> dists;
  std::vector<Transform> ts;
  for (int h = 0; h < 3; ++h) {
    dists.push_back(random_distribution(rng, 3, -2.0, 1.0));
    ts.push_back(unexpected_bernstein_transform(c_eta(0.5, 1.0)));
  }
  const std::vector<double> prior = {0.2, 0.5, 0.3};
  EXPECT_TRUE(check_pac_bayes_esi(dists, prior, prior, 0.5, ts).holds);
}

TEST(PacBayes, SingleHypothesisIsIndividualEsi) {
  const auto d = DiscreteDistribution::two_point(-1.0, 1.0, 0.4);
  const Transform t = unexpected_bernstein_transform(c_eta(0.3, 1.0));
  const std::vector<DiscreteDistribution> dists = {d};
  const std::vector<double> w = {1.0};
  const std::vector<Transform> ts = {t};
  EXPECT_NEAR(check_pac_bayes_esi(dists, w, w, 0.3, ts).mgf_value, esi_mgf(d, 0.3, t).mgf_value,
              1e-15);
}

TEST(PacBayes, InfiniteKlIsVacuous) {
  std::vector<DiscreteDistribution> dists(2, DiscreteDistribution::point_mass(0.0));
  const std::vector<double> prior = {1.0, 0.0};
  const std::vector<double> posterior = {0.5, 0.5};
  const std::vector<Transform> ts = {unexpected_bernstein_transform(0.0)};
  const auto r = check_pac_bayes_esi(dists, prior, posterior, 0.5, ts);
  EXPECT_TRUE(r.holds);
  EXPECT_TRUE(r.vacuous);
}

TEST(GridMixture, Arithmetic) {
  const EtaGrid g = build_eta_grid(1000, 0.05, 1.0);
  const std::vector<double> ones(4, 1.0);
  EXPECT_TRUE(check_grid_mixture(g, ones));
  const std::vector<double> mgfs = {0.9, 0.95, 1.0, 0.8};
  EXPECT_TRUE(check_grid_mixture(g, mgfs));
  const std::vector<double> over = {1.1, 1.0, 1.0, 1.0};
  EXPECT_FALSE(check_grid_mixture(g, over));
  const std::vector<double> short_list = {1.0};
  EXPECT_THROW(check_grid_mixture(g, short_list), DomainError);
}

TEST(MeanBound, SpotValues) {
  const std::vector<double> constant(100, 0.3);
  EXPECT_NEAR(empirical_bernstein_mean_bound(constant, 0.05), 0.12763069911340791, 1e-14);

  std::vector<double> coin(100, 0.0);
  for (int i = 0; i < 50; ++i) coin[i] = 1.0;
  EXPECT_NEAR(empirical_bernstein_mean_bound(coin, 0.05), 0.27735833773640862, 1e-14);

  std::vector<double> skewed(1000, 0.0);
  for (int i = 0; i < 100; ++i) skewed[i] = 1.0;
  EXPECT_NEAR(empirical_bernstein_mean_bound(skewed, 0.1), 0.047526281627888538, 1e-14);
}

TEST(MeanBound, ShrinksWithN) {
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t n : {10, 100, 1000, 10000, 100000}) {
    const std::vector<double> zeros(n, 0.0);
    const double v = empirical_bernstein_mean_bound(zeros, 0.05);
    EXPECT_LT(v, prev);
    prev = v;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(MeanBound, RejectsBadInput) {
  const std::vector<double> empty;
  EXPECT_THROW(empirical_bernstein_mean_bound(empty, 0.05), DomainError);
  const std::vector<double> outside = {0.5, 1.5};
  EXPECT_THROW(empirical_bernstein_mean_bound(outside, 0.05), DomainError);
}

TEST(Suites, AllPassAtModerateSize) {
  EXPECT_TRUE(unexpected_bernstein_suite(200, 1).passed());
  EXPECT_TRUE(standard_bernstein_suite(200, 1).passed());
  EXPECT_TRUE(tightness_suite().passed());
  EXPECT_TRUE(chain_suite(50, 1).passed());
  EXPECT_TRUE(pac_bayes_suite(50, 1).passed());
  EXPECT_TRUE(grid_mixture_suite(50, 1).passed());
}

}  // namespace
}  // namespace pacbayes::esi
