#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "pacbayes/learners.hpp"

namespace pacbayes {

/// N(mean, variance * I_d).
struct IsotropicGaussian {
  Eigen::VectorXd mean;
  double variance = 1.0;

  /// Throws DomainError unless variance > 0 and the mean is finite.
  void validate() const;
  [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(mean.size()); }
};

struct McConfig {
  std::size_t sample_count = 1000;
  std::uint64_t seed = 0;
};

/// M x d matrix of independent standard normal draws, filled row by row.
Eigen::MatrixXd standard_normal_draws(std::size_t rows, std::size_t cols, std::uint64_t seed);

/// M draws mean + sqrt(variance) z. Deterministic given mc.seed.
std::vector<Hypothesis> sample_hypotheses(const IsotropicGaussian& dist, const McConfig& mc);

/// Monte Carlo estimate of E_{h ~ dist}[L_n(h)] for the 0-1 loss.
double mc_expected_loss(const IsotropicGaussian& dist, const Eigen::MatrixXd& features,
                        const Eigen::VectorXd& labels, const McConfig& mc);

/// Monte Carlo estimate of E_{h ~ posterior}[(1/n) sum_k (l_h(Z_k) - ref_losses[k])^2].
/// ref_losses[k] is the loss of the second-half estimator for k < split_m and
/// of the first-half estimator otherwise.
double mc_vn(const IsotropicGaussian& posterior, const Eigen::MatrixXd& features,
             const Eigen::VectorXd& labels, std::size_t split_m,
             const Eigen::VectorXd& ref_losses, const McConfig& mc);

/// (1/n) sum_k ref_losses[k]^2.
double vn_prime(const Eigen::VectorXd& ref_losses, std::size_t split_m);

/// var_{<=m}(ref) + var_{>m}(ref) with 1/len normalization within each half.
double g_n_prime(const Eigen::VectorXd& ref_losses, std::size_t split_m);

/// Sum_i (x_i - mean)^2 / (n - 1). Requires n >= 2.
double empirical_loss_variance(const Eigen::Ref<const Eigen::VectorXd>& losses);

/// Biased variance (1/n normalization). Requires n >= 1.
double population_variance(const Eigen::Ref<const Eigen::VectorXd>& values);

/// Losses of the cross-fitted estimators: l_{second_half}(Z_k) for k < m and
/// l_{first_half}(Z_k) for k >= m.
Eigen::VectorXd cross_fitted_losses(const Hypothesis& first_half_estimator,
                                    const Hypothesis& second_half_estimator,
                                    const Eigen::MatrixXd& features, const Eigen::VectorXd& labels,
                                    std::size_t split_m);

struct PosteriorStats {
  double empirical_loss = 0.0;  // L_n(P)
  double v_n = 0.0;
  double g_n = 0.0;
  double empirical_loss_stderr = 0.0;  // Monte Carlo standard error of L_n(P)
};

/// Evaluates posteriors N(mean, sigma^2 I) on a fixed sample with one shared
/// set of standard normal draws. The draws are projected onto the data once,
/// so each evaluation costs O(M n) regardless of d, and every variance on a
/// grid sees the same random numbers.
class PosteriorSampler {
 public:
  PosteriorSampler(const Eigen::MatrixXd& features, const Eigen::VectorXd& labels,
                   const McConfig& mc);

  [[nodiscard]] PosteriorStats evaluate(const IsotropicGaussian& posterior, std::size_t split_m,
                                        const Eigen::VectorXd& ref_losses) const;

  /// M x n matrix of 0-1 losses of each sampled hypothesis.
  [[nodiscard]] Eigen::MatrixXd loss_matrix(const IsotropicGaussian& posterior) const;

  [[nodiscard]] std::size_t sample_count() const noexcept {
    return static_cast<std::size_t>(projections_.rows());
  }
  [[nodiscard]] std::size_t size() const noexcept {
    return static_cast<std::size_t>(projections_.cols());
  }

 private:
  Eigen::MatrixXd features_;
  Eigen::VectorXd labels_;
  Eigen::MatrixXd projections_;  // M x n, row s holds z_s^T x_k
};

}  // namespace pacbayes
