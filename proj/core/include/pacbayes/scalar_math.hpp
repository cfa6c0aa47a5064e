#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace pacbayes {

/// theta(u) = (-ln(1 - u) - u) / u^2 on [0, 1), continuous at 0 with value 1/2.
double theta(double u);

/// kappa(x) = (e^x - x - 1) / x^2, continuous at 0 with value 1/2.
double kappa(double x);

/// Multiplier of the squared-loss term in the un-expected Bernstein inequality:
/// eta * theta(eta * b). Requires 0 < eta < 1/b.
double c_eta(double eta, double b);

/// Multiplier of the second moment in the standard Bernstein inequality:
/// eta * kappa(eta * b).
double s_eta(double eta, double b);

/// Binary Kullback-Leibler divergence kl(q || p) between Bernoulli(q) and
/// Bernoulli(p). Uses 0 ln 0 = 0 and returns +inf when p in {0, 1} disagrees
/// with q.
double binary_kl(double q, double p);

/// Largest p in [q_hat, 1] with kl(q_hat || p) <= budget, by bisection.
double invert_kl_upper(double q_hat, double budget);

/// Closed-form relaxation q + sqrt(2 q B) + 2 B of the kl inversion. May
/// exceed 1.
double relaxed_kl_upper(double q_hat, double budget);

/// Finite grid of learning rates with a prior distribution over it.
///
/// Points are strictly decreasing and lie in ]0, 1/loss_bound[. Weights are a
/// probability vector of the same length.
struct EtaGrid {
  std::vector<double> points;
  std::vector<double> prior_weights;
  double loss_bound = 1.0;

  [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
  [[nodiscard]] bool empty() const noexcept { return points.empty(); }
};

/// Grid {1/(2b), ..., 1/(2^K b)} with
/// K = ceil(log2(sqrt(n / ln(1/delta)) / 2)) clamped to at least 1, and a
/// uniform prior.
EtaGrid build_eta_grid(std::size_t n, double delta, double b);

/// Grid {1/2, ..., 1/2^K} with K = ceil(log2(sqrt(n / (2 ln(2/delta)))))
/// clamped to at least 1, and a uniform prior. Used by the mean confidence
/// bound.
EtaGrid build_mean_grid(std::size_t n, double delta);

/// KL(N(mean1, var1 I) || N(mean2, var2 I)).
double gaussian_kl(const Eigen::Ref<const Eigen::VectorXd>& mean1, double var1,
                   const Eigen::Ref<const Eigen::VectorXd>& mean2, double var2);

/// Constants of the empirical-Bernstein (variance based) PAC-Bayes bound at a
/// single learning rate.
struct Thm3Constants {
  std::size_t m = 0;
  double eta = 0.0;
  double tilde_c = 0.0;
  double beta_eta = 0.0;
  double lambda_eta = 0.0;
};

/// tilde_c = s_eta * r / (1 + eta r), beta = eta + eta^2 r and
/// lambda = eta beta / (eta + beta), where r = m / (2m - 2).
Thm3Constants thm3_constants(double eta, double b, std::size_t m);

}  // namespace pacbayes
