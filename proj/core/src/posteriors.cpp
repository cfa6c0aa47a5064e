#include "pacbayes/posteriors.hpp"

#include <cmath>
#include <random>

#include "pacbayes/errors.hpp"

namespace pacbayes {
namespace {

void check_split(std::size_t n, std::size_t split_m, Eigen::Index ref_size) {
  if (static_cast<std::size_t>(ref_size) != n) {
    throw DomainError("reference losses and dataset differ in length");
  }
  if (split_m == 0 || split_m >= n) throw DomainError("split point must lie in [1, n-1]");
}

void check_data(const Eigen::MatrixXd& features, const Eigen::VectorXd& labels) {
  if (features.rows() == 0) throw DomainError("empty dataset");
  if (features.rows() != labels.size()) throw DomainError("features and labels differ in length");
}

// Row-wise 0-1 losses from margins; predicts 1 iff margin > 0.
Eigen::ArrayXXd losses_from_margins(const Eigen::ArrayXXd& margins, const Eigen::VectorXd& labels) {
  const Eigen::RowVectorXd y = labels.transpose();
  const Eigen::ArrayXXd predicted = (margins > 0.0).cast<double>();
  return (predicted.rowwise() - y.array()).abs();
}

double half_variances(const Eigen::Ref<const Eigen::VectorXd>& values, std::size_t split_m) {
  const auto m = static_cast<Eigen::Index>(split_m);
  return population_variance(values.head(m)) + population_variance(values.tail(values.size() - m));
}

}  // namespace

void IsotropicGaussian::validate() const {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw DomainError("IsotropicGaussian: variance must be positive and finite");
  }
  if (!mean.allFinite()) throw DomainError("IsotropicGaussian: mean must be finite");
}

Eigen::MatrixXd standard_normal_draws(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd z(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index r = 0; r < z.rows(); ++r) {
    for (Eigen::Index c = 0; c < z.cols(); ++c) z(r, c) = normal(rng);
  }
  return z;
}

std::vector<Hypothesis> sample_hypotheses(const IsotropicGaussian& dist, const McConfig& mc) {
  dist.validate();
  if (mc.sample_count == 0) throw DomainError("sample_hypotheses: sample_count must be >= 1");
  const Eigen::MatrixXd z = standard_normal_draws(mc.sample_count, dist.dim(), mc.seed);
  const double sigma = std::sqrt(dist.variance);
  std::vector<Hypothesis> out;
  out.reserve(mc.sample_count);
  for (Eigen::Index s = 0; s < z.rows(); ++s) {
    out.push_back(Hypothesis{dist.mean + sigma * z.row(s).transpose()});
  }
  return out;
}

double mc_expected_loss(const IsotropicGaussian& dist, const Eigen::MatrixXd& features,
                        const Eigen::VectorXd& labels, const McConfig& mc) {
  check_data(features, labels);
  const PosteriorSampler sampler(features, labels, mc);
  return sampler.loss_matrix(dist).mean();
}

double mc_vn(const IsotropicGaussian& posterior, const Eigen::MatrixXd& features,
             const Eigen::VectorXd& labels, std::size_t split_m, const Eigen::VectorXd& ref_losses,
             const McConfig& mc) {
  check_data(features, labels);
  check_split(static_cast<std::size_t>(features.rows()), split_m, ref_losses.size());
  const PosteriorSampler sampler(features, labels, mc);
  return sampler.evaluate(posterior, split_m, ref_losses).v_n;
}

double vn_prime(const Eigen::VectorXd& ref_losses, std::size_t split_m) {
  check_split(static_cast<std::size_t>(ref_losses.size()), split_m, ref_losses.size());
  return ref_losses.squaredNorm() / static_cast<double>(ref_losses.size());
}

double g_n_prime(const Eigen::VectorXd& ref_losses, std::size_t split_m) {
  check_split(static_cast<std::size_t>(ref_losses.size()), split_m, ref_losses.size());
  return half_variances(ref_losses, split_m);
}

double empirical_loss_variance(const Eigen::Ref<const Eigen::VectorXd>& losses) {
  if (losses.size() < 2) throw DomainError("empirical_loss_variance: need at least 2 values");
  const double mean = losses.mean();
  return (losses.array() - mean).square().sum() / static_cast<double>(losses.size() - 1);
}

double population_variance(const Eigen::Ref<const Eigen::VectorXd>& values) {
  if (values.size() == 0) throw DomainError("population_variance: empty input");
  const double mean = values.mean();
  return (values.array() - mean).square().sum() / static_cast<double>(values.size());
}

Eigen::VectorXd cross_fitted_losses(const Hypothesis& first_half_estimator,
                                    const Hypothesis& second_half_estimator,
                                    const Eigen::MatrixXd& features, const Eigen::VectorXd& labels,
                                    std::size_t split_m) {
  check_data(features, labels);
  const auto n = features.rows();
  check_split(static_cast<std::size_t>(n), split_m, n);
  const auto m = static_cast<Eigen::Index>(split_m);
  Eigen::VectorXd out(n);
  out.head(m) = zero_one_losses(second_half_estimator, features.topRows(m), labels.head(m));
  out.tail(n - m) = zero_one_losses(first_half_estimator, features.bottomRows(n - m),
                                    labels.tail(n - m));
  return out;
}

PosteriorSampler::PosteriorSampler(const Eigen::MatrixXd& features, const Eigen::VectorXd& labels,
                                   const McConfig& mc)
    : features_(features), labels_(labels) {
  check_data(features, labels);
  if (mc.sample_count == 0) throw DomainError("PosteriorSampler: sample_count must be >= 1");
  if (!features.allFinite()) throw DataError("PosteriorSampler: non-finite feature value");
  const Eigen::MatrixXd z =
      standard_normal_draws(mc.sample_count, static_cast<std::size_t>(features.cols()), mc.seed);
  projections_ = z * features.transpose();
}

Eigen::MatrixXd PosteriorSampler::loss_matrix(const IsotropicGaussian& posterior) const {
  posterior.validate();
  if (posterior.mean.size() != features_.cols()) {
    throw DomainError("PosteriorSampler: posterior dimension does not match the data");
  }
  const Eigen::RowVectorXd center = (features_ * posterior.mean).transpose();
  const double sigma = std::sqrt(posterior.variance);
  Eigen::ArrayXXd margins = sigma * projections_.array();
  margins.rowwise() += center.array();
  return losses_from_margins(margins, labels_).matrix();
}

PosteriorStats PosteriorSampler::evaluate(const IsotropicGaussian& posterior, std::size_t split_m,
                                          const Eigen::VectorXd& ref_losses) const {
  const auto n = static_cast<std::size_t>(features_.rows());
  check_split(n, split_m, ref_losses.size());
  posterior.validate();
  if (posterior.mean.size() != features_.cols()) {
    throw DomainError("PosteriorSampler: posterior dimension does not match the data");
  }
  const Eigen::VectorXd center = features_ * posterior.mean;
  const double sigma = std::sqrt(posterior.variance);
  const Eigen::Index samples = projections_.rows();
  const auto m = static_cast<Eigen::Index>(split_m);
  const auto cols = static_cast<Eigen::Index>(n);

  // One pass over columns (contiguous in the M x n layout). Per draw we keep
  // the loss sum and, per half, the first two moments of loss - reference.
  Eigen::ArrayXd loss_sum = Eigen::ArrayXd::Zero(samples);
  Eigen::ArrayXd d_sum[2] = {Eigen::ArrayXd::Zero(samples), Eigen::ArrayXd::Zero(samples)};
  Eigen::ArrayXd d2_sum[2] = {Eigen::ArrayXd::Zero(samples), Eigen::ArrayXd::Zero(samples)};
  Eigen::ArrayXd loss(samples);
  for (Eigen::Index k = 0; k < cols; ++k) {
    const auto predicted = ((sigma * projections_.col(k).array() + center[k]) > 0.0).cast<double>();
    if (labels_[k] == 1.0) {
      loss = 1.0 - predicted;
    } else {
      loss = predicted;
    }
    loss_sum += loss;
    const int half = k < m ? 0 : 1;
    d_sum[half] += loss - ref_losses[k];
    d2_sum[half] += (loss - ref_losses[k]).square();
  }

  const double first = static_cast<double>(m);
  const double second = static_cast<double>(cols - m);
  const Eigen::ArrayXd per_sample_loss = loss_sum / static_cast<double>(cols);
  const Eigen::ArrayXd var_first =
      (d2_sum[0] / first - (d_sum[0] / first).square()).cwiseMax(0.0);
  const Eigen::ArrayXd var_second =
      (d2_sum[1] / second - (d_sum[1] / second).square()).cwiseMax(0.0);

  PosteriorStats stats;
  stats.empirical_loss = per_sample_loss.mean();
  stats.v_n = (d2_sum[0] + d2_sum[1]).sum() / (static_cast<double>(samples) * static_cast<double>(cols));
  stats.g_n = (var_first + var_second).mean();
  if (samples > 1) {
    stats.empirical_loss_stderr =
        std::sqrt(empirical_loss_variance(per_sample_loss.matrix()) / static_cast<double>(samples));
  }
  return stats;
}

}  // namespace pacbayes
