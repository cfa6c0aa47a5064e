#include "pacbayes/learners.hpp"

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "pacbayes/datasets.hpp"
#include "pacbayes/errors.hpp"
#include "property.hpp"

namespace pacbayes {
namespace {

using testing::for_all;
using testing::uniform;

struct Problem {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
};

Problem random_problem(std::mt19937_64& rng, Eigen::Index n, Eigen::Index d) {
  std::normal_distribution<double> normal;
  std::bernoulli_distribution coin(0.5);
  Problem p{Eigen::MatrixXd(n, d), Eigen::VectorXd(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) p.x(i, j) = normal(rng);
    p.y[i] = coin(rng) ? 1.0 : 0.0;
  }
  return p;
}

Eigen::VectorXd random_vector(std::mt19937_64& rng, Eigen::Index d, double scale) {
  Eigen::VectorXd v(d);
  for (Eigen::Index j = 0; j < d; ++j) v[j] = uniform(rng, -scale, scale);
  return v;
}

Eigen::VectorXd central_difference(const LogisticObjective& f, const Eigen::VectorXd& h,
                                   double step) {
  Eigen::VectorXd g(h.size());
  for (Eigen::Index j = 0; j < h.size(); ++j) {
    Eigen::VectorXd plus = h, minus = h;
    plus[j] += step;
    minus[j] -= step;
    g[j] = (f.value(plus) - f.value(minus)) / (2.0 * step);
  }
  return g;
}

TEST(Sigmoid, Values) {
  EXPECT_EQ(sigmoid(0.0), 0.5);
  EXPECT_LE(sigmoid(50.0), 1.0);
  EXPECT_GT(sigmoid(-50.0), 0.0);
  EXPECT_LT(sigmoid(-50.0), 1e-20);
  EXPECT_TRUE(std::isfinite(sigmoid(1000.0)));
  EXPECT_TRUE(std::isfinite(sigmoid(-1000.0)));
  for (double w = -30.0; w <= 30.0; w += 0.37) {
    EXPECT_NEAR(sigmoid(-w), 1.0 - sigmoid(w), 1e-15) << "w = " << w;
  }
}

TEST(ZeroOneLoss, Examples) {
  const Hypothesis zero{Eigen::VectorXd::Zero(3)};
  const Eigen::VectorXd x = Eigen::VectorXd::Ones(3);
  EXPECT_EQ(zero_one_loss(zero, x, 1), 1);
  EXPECT_EQ(zero_one_loss(zero, x, 0), 0);
  Hypothesis h{Eigen::VectorXd::Zero(3)};
  h.weights << 3.2, 0.0, 0.0;
  EXPECT_EQ(zero_one_loss(h, x, 1), 0);
  EXPECT_EQ(zero_one_loss(h, x, 0), 1);
  EXPECT_THROW(zero_one_loss(h, Eigen::VectorXd::Ones(2), 1), DomainError);
}

TEST(ZeroOneLoss, VectorFormMatchesScalar) {
  std::mt19937_64 rng(1);
  const Problem p = random_problem(rng, 50, 4);
  const Hypothesis h{random_vector(rng, 4, 1.0)};
  const Eigen::VectorXd losses = zero_one_losses(h, p.x, p.y);
  double total = 0.0;
  for (Eigen::Index i = 0; i < 50; ++i) {
    EXPECT_EQ(losses[i], zero_one_loss(h, p.x.row(i).transpose(), static_cast<int>(p.y[i])));
    total += losses[i];
  }
  EXPECT_DOUBLE_EQ(empirical_error(h, p.x, p.y), total / 50.0);
}

TEST(TrainLogistic, SeparableTwoPoints) {
  Eigen::MatrixXd x(2, 2);
  x << 1.0, 0.5, -1.0, -0.5;
  Eigen::VectorXd y(2);
  y << 1.0, 0.0;
  const Hypothesis h = train_logistic(x, y, TrainOptions{});
  EXPECT_EQ(empirical_error(h, x, y), 0.0);
}

TEST(TrainLogistic, ConstantLabels) {
  std::mt19937_64 rng(2);
  Problem p = random_problem(rng, 30, 3);
  p.x.col(0).setOnes();  // intercept column
  p.y.setZero();
  const Hypothesis h = train_logistic(p.x, p.y, TrainOptions{});
  EXPECT_EQ(empirical_error(h, p.x, p.y), 0.0);
}

TEST(TrainLogistic, StationaryAndFiniteDifferenceConsistent) {
  std::mt19937_64 rng(3);
  const Problem p = random_problem(rng, 200, 5);
  TrainOptions opts;
  const TrainResult r = train_logistic_traced(p.x, p.y, opts);
  ASSERT_TRUE(r.converged);
  const LogisticObjective f(p.x, p.y, opts.lambda);
  const Eigen::VectorXd g = f.gradient(r.hypothesis.weights);
  EXPECT_LE(g.lpNorm<Eigen::Infinity>(), opts.grad_tolerance);
  EXPECT_NEAR(r.gradient_inf_norm, g.lpNorm<Eigen::Infinity>(), 1e-15);
  const Eigen::VectorXd fd = central_difference(f, r.hypothesis.weights, 1e-6);
  EXPECT_LE((fd - g).lpNorm<Eigen::Infinity>(), 1e-4 * std::max(1.0, g.lpNorm<Eigen::Infinity>()));
  EXPECT_LE(f.value(r.hypothesis.weights), f.value(Eigen::VectorXd::Zero(5)));
}

TEST(TrainLogistic, DeterministicBitwise) {
  std::mt19937_64 rng(4);
  const Problem p = random_problem(rng, 100, 6);
  TrainOptions opts;
  opts.seed = 99;
  const Hypothesis a = train_logistic(p.x, p.y, opts);
  const Hypothesis b = train_logistic(p.x, p.y, opts);
  ASSERT_EQ(a.weights.size(), b.weights.size());
  for (Eigen::Index j = 0; j < a.weights.size(); ++j) EXPECT_EQ(a.weights[j], b.weights[j]);
}

TEST(TrainLogistic, ObjectiveTraceDecreases) {
  for_all(20, 5, [](std::mt19937_64& rng) {
    const Problem p = random_problem(rng, 80, 4);
    const TrainResult r = train_logistic_traced(p.x, p.y, TrainOptions{});
    ASSERT_FALSE(r.objective_trace.empty());
    for (std::size_t k = 1; k < r.objective_trace.size(); ++k) {
      EXPECT_LE(r.objective_trace[k], r.objective_trace[k - 1]);
    }
  });
}

TEST(TrainLogistic, ConvergesOnSyntheticData) {
  SyntheticSpec spec;
  spec.n = 2000;
  spec.seed = 8;
  const Dataset data = gen_synthetic(spec);
  const TrainResult r = train_logistic_traced(data.features, data.labels, TrainOptions{});
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.iterations, 500);
}

TEST(TrainLogistic, RejectsBadInput) {
  Eigen::MatrixXd x(2, 1);
  x << 1.0, std::numeric_limits<double>::quiet_NaN();
  Eigen::VectorXd y(2);
  y << 1.0, 0.0;
  EXPECT_THROW(train_logistic(x, y, TrainOptions{}), DataError);
  x << 1.0, 2.0;
  y << 1.0, 0.5;
  EXPECT_THROW(train_logistic(x, y, TrainOptions{}), DataError);
  EXPECT_THROW(train_logistic(Eigen::MatrixXd(0, 1), Eigen::VectorXd(0), TrainOptions{}),
               DataError);
}

TEST(LogisticObjective, Convex) {
  for_all(200, 6, [](std::mt19937_64& rng) {
    const Problem p = random_problem(rng, 40, 3);
    const LogisticObjective f(p.x, p.y, uniform(rng, 0.0, 1.0));
    const Eigen::VectorXd a = random_vector(rng, 3, 5.0);
    const Eigen::VectorXd b = random_vector(rng, 3, 5.0);
    const double t = uniform(rng, 0.0, 1.0);
    EXPECT_LE(f.value(t * a + (1 - t) * b), t * f.value(a) + (1 - t) * f.value(b) + 1e-10);
  });
}

TEST(LogisticObjective, GradientMatchesFiniteDifferences) {
  for_all(50, 7, [](std::mt19937_64& rng) {
    const Problem p = random_problem(rng, 60, 4);
    const LogisticObjective f(p.x, p.y, 0.01);
    const Eigen::VectorXd h = random_vector(rng, 4, 2.0);
    const Eigen::VectorXd g = f.gradient(h);
    const Eigen::VectorXd fd = central_difference(f, h, 1e-5);
    for (Eigen::Index j = 0; j < 4; ++j) {
      EXPECT_NEAR(fd[j], g[j], 1e-5 * std::max(1.0, std::abs(g[j])));
    }
    Eigen::VectorXd g2;
    EXPECT_DOUBLE_EQ(f.value_and_gradient(h, g2), f.value(h));
    EXPECT_EQ((g2 - g).lpNorm<Eigen::Infinity>(), 0.0);
  });
}

TEST(LogisticObjective, ValueAtOriginIsLog2) {
  std::mt19937_64 rng(9);
  const Problem p = random_problem(rng, 25, 3);
  const LogisticObjective f(p.x, p.y, 0.3);
  EXPECT_NEAR(f.value(Eigen::VectorXd::Zero(3)), std::log(2.0), 1e-15);
}

}  // namespace
}  // namespace pacbayes
