#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace pacbayes {

/// A linear classifier h in R^d. Predicts 1 iff h^T x > 0.
struct Hypothesis {
  Eigen::VectorXd weights;
};

struct TrainOptions {
  double lambda = 0.01;
  int max_iters = 500;
  double grad_tolerance = 1e-6;
  // Recorded for provenance. The optimizer starts at the origin and is fully
  // deterministic, so it never draws from this seed.
  std::uint64_t seed = 0;
};

/// Numerically stable logistic function 1 / (1 + e^-w).
double sigmoid(double w);

/// |y - 1{h^T x > 0}|. The boundary h^T x = 0 predicts class 0.
int zero_one_loss(const Hypothesis& h, const Eigen::Ref<const Eigen::VectorXd>& x, int y);

/// 0-1 losses of h on every row of `features`.
Eigen::VectorXd zero_one_losses(const Hypothesis& h, const Eigen::MatrixXd& features,
                                const Eigen::VectorXd& labels);

/// Average 0-1 loss of h on a dataset.
double empirical_error(const Hypothesis& h, const Eigen::MatrixXd& features,
                       const Eigen::VectorXd& labels);

/// lambda ||h||^2 / 2 + (1/q) sum_i [softplus(h^T x_i) - y_i h^T x_i], the
/// L2-regularized logistic negative log-likelihood.
class LogisticObjective {
 public:
  LogisticObjective(const Eigen::MatrixXd& features, const Eigen::VectorXd& labels,
                    double lambda);

  [[nodiscard]] double value(const Eigen::VectorXd& h) const;
  [[nodiscard]] Eigen::VectorXd gradient(const Eigen::VectorXd& h) const;
  /// Returns the value and writes the gradient into `grad`.
  double value_and_gradient(const Eigen::VectorXd& h, Eigen::VectorXd& grad) const;
  [[nodiscard]] Eigen::Index dim() const noexcept { return features_.cols(); }

 private:
  const Eigen::MatrixXd& features_;
  const Eigen::VectorXd& labels_;
  double lambda_;
};

struct TrainResult {
  Hypothesis hypothesis;
  int iterations = 0;
  double gradient_inf_norm = 0.0;
  bool converged = false;
  // Objective after each accepted step, starting with the value at h = 0.
  std::vector<double> objective_trace;
};

/// Minimizes LogisticObjective with BFGS and an Armijo backtracking line
/// search, stopping at ||grad||_inf <= grad_tolerance or max_iters.
TrainResult train_logistic_traced(const Eigen::MatrixXd& features, const Eigen::VectorXd& labels,
                                  const TrainOptions& opts);

Hypothesis train_logistic(const Eigen::MatrixXd& features, const Eigen::VectorXd& labels,
                          const TrainOptions& opts);

}  // namespace pacbayes
