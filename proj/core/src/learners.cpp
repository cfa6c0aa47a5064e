#include "pacbayes/learners.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "pacbayes/errors.hpp"

namespace pacbayes {
namespace {

// log(1 + e^w) without overflow.
double softplus(double w) {
  return w > 0.0 ? w + std::log1p(std::exp(-w)) : std::log1p(std::exp(w));
}

void check_training_data(const Eigen::MatrixXd& features, const Eigen::VectorXd& labels) {
  if (features.rows() == 0) throw DataError("train_logistic: empty dataset");
  if (features.rows() != labels.size()) {
    throw DataError("train_logistic: feature/label row mismatch");
  }
  if (!features.allFinite()) throw DataError("train_logistic: non-finite feature value");
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0.0 && labels[i] != 1.0) {
      throw DataError("train_logistic: labels must be 0 or 1");
    }
  }
}

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;

}  // namespace

double sigmoid(double w) {
  if (w >= 0.0) return 1.0 / (1.0 + std::exp(-w));
  const double e = std::exp(w);
  return e / (1.0 + e);
}

int zero_one_loss(const Hypothesis& h, const Eigen::Ref<const Eigen::VectorXd>& x, int y) {
  if (h.weights.size() != x.size()) throw DomainError("zero_one_loss: dimension mismatch");
  const int predicted = h.weights.dot(x) > 0.0 ? 1 : 0;
  return predicted == y ? 0 : 1;
}

Eigen::VectorXd zero_one_losses(const Hypothesis& h, const Eigen::MatrixXd& features,
                                const Eigen::VectorXd& labels) {
  if (h.weights.size() != features.cols()) {
    throw DomainError("zero_one_losses: dimension mismatch");
  }
  const Eigen::VectorXd margins = features * h.weights;
  Eigen::VectorXd out(margins.size());
  for (Eigen::Index i = 0; i < margins.size(); ++i) {
    const double predicted = margins[i] > 0.0 ? 1.0 : 0.0;
    out[i] = predicted == labels[i] ? 0.0 : 1.0;
  }
  return out;
}

double empirical_error(const Hypothesis& h, const Eigen::MatrixXd& features,
                       const Eigen::VectorXd& labels) {
  if (features.rows() == 0) return 0.0;
  return zero_one_losses(h, features, labels).mean();
}

LogisticObjective::LogisticObjective(const Eigen::MatrixXd& features,
                                     const Eigen::VectorXd& labels, double lambda)
    : features_(features), labels_(labels), lambda_(lambda) {
  if (!(lambda >= 0.0)) throw DomainError("LogisticObjective: lambda must be nonnegative");
}

double LogisticObjective::value(const Eigen::VectorXd& h) const {
  const Eigen::VectorXd w = features_ * h;
  double nll = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) nll += softplus(w[i]) - labels_[i] * w[i];
  return 0.5 * lambda_ * h.squaredNorm() + nll / static_cast<double>(w.size());
}

Eigen::VectorXd LogisticObjective::gradient(const Eigen::VectorXd& h) const {
  Eigen::VectorXd g;
  value_and_gradient(h, g);
  return g;
}

double LogisticObjective::value_and_gradient(const Eigen::VectorXd& h,
                                             Eigen::VectorXd& grad) const {
  const Eigen::VectorXd w = features_ * h;
  Eigen::VectorXd residual(w.size());
  double nll = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    nll += softplus(w[i]) - labels_[i] * w[i];
    residual[i] = sigmoid(w[i]) - labels_[i];
  }
  const double q = static_cast<double>(w.size());
  grad = lambda_ * h + features_.transpose() * residual / q;
  return 0.5 * lambda_ * h.squaredNorm() + nll / q;
}

TrainResult train_logistic_traced(const Eigen::MatrixXd& features, const Eigen::VectorXd& labels,
                                  const TrainOptions& opts) {
  check_training_data(features, labels);
  if (!(opts.grad_tolerance > 0.0)) throw DomainError("train_logistic: grad_tolerance <= 0");
  if (opts.max_iters < 1) throw DomainError("train_logistic: max_iters must be positive");

  const LogisticObjective objective(features, labels, opts.lambda);
  const Eigen::Index d = objective.dim();

  TrainResult result;
  Eigen::VectorXd h = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd grad;
  double f = objective.value_and_gradient(h, grad);
  result.objective_trace.push_back(f);

  Eigen::MatrixXd inv_hessian = Eigen::MatrixXd::Identity(d, d);
  bool fresh_hessian = true;
  Eigen::VectorXd h_next;
  Eigen::VectorXd grad_next;

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    result.gradient_inf_norm = grad.size() ? grad.lpNorm<Eigen::Infinity>() : 0.0;
    if (result.gradient_inf_norm <= opts.grad_tolerance) {
      result.converged = true;
      break;
    }
    Eigen::VectorXd direction = -inv_hessian * grad;
    double slope = grad.dot(direction);
    if (!(slope < 0.0)) {
      inv_hessian.setIdentity();
      fresh_hessian = true;
      direction = -grad;
      slope = -grad.squaredNorm();
    }

    double step = 1.0;
    double f_next = f;
    bool accepted = false;
    for (int k = 0; k < kMaxBacktracks; ++k) {
      h_next = h + step * direction;
      f_next = objective.value_and_gradient(h_next, grad_next);
      if (std::isfinite(f_next) && f_next <= f + kArmijo * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (fresh_hessian) break;  // no progress possible along -grad either
      inv_hessian.setIdentity();
      fresh_hessian = true;
      continue;
    }

    const Eigen::VectorXd s = h_next - h;
    const Eigen::VectorXd y = grad_next - grad;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (fresh_hessian) {
        inv_hessian *= sy / y.squaredNorm();
        fresh_hessian = false;
      }
      const double rho = 1.0 / sy;
      const Eigen::VectorXd hy = inv_hessian * y;
      // BFGS inverse update: (I - rho s y^T) H (I - rho y s^T) + rho s s^T.
      inv_hessian += rho * ((1.0 + rho * y.dot(hy)) * (s * s.transpose()) -
                            (hy * s.transpose() + s * hy.transpose()));
    }

    h.swap(h_next);
    grad.swap(grad_next);
    f = f_next;
    result.objective_trace.push_back(f);
    result.iterations = iter + 1;
  }
  result.gradient_inf_norm = grad.size() ? grad.lpNorm<Eigen::Infinity>() : 0.0;
  result.converged = result.gradient_inf_norm <= opts.grad_tolerance;
  result.hypothesis.weights = std::move(h);
  return result;
}

Hypothesis train_logistic(const Eigen::MatrixXd& features, const Eigen::VectorXd& labels,
                          const TrainOptions& opts) {
  return train_logistic_traced(features, labels, opts).hypothesis;
}

}  // namespace pacbayes
