#include "pacbayes/scalar_math.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pacbayes/errors.hpp"

namespace pacbayes {
namespace {

constexpr double kSeriesThreshold = 1e-4;
constexpr int kKlMaxIterations = 200;

double xlogy_ratio(double x, double y) {
  // x ln(x / y) with the 0 ln 0 = 0 convention.
  if (x == 0.0) return 0.0;
  if (y == 0.0) return std::numeric_limits<double>::infinity();
  return x * std::log(x / y);
}

std::size_t clamped_grid_size(double k) {
  if (!(k >= 1.0)) return 1;
  return static_cast<std::size_t>(k);
}

EtaGrid geometric_grid(std::size_t k, double b) {
  EtaGrid grid;
  grid.loss_bound = b;
  grid.points.reserve(k);
  const double top = 1.0 / b;
  for (std::size_t i = 1; i <= k; ++i) {
    grid.points.push_back(std::ldexp(top, -static_cast<int>(i)));
  }
  grid.prior_weights.assign(k, 1.0 / static_cast<double>(k));
  return grid;
}

void require_probability(double delta, const char* what) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError(std::string(what) + " must lie in ]0, 1[");
  }
}

}  // namespace

double theta(double u) {
  if (!(u >= 0.0) || u >= 1.0) {
    throw DomainError("theta: argument must lie in [0, 1)");
  }
  if (u < kSeriesThreshold) {
    // sum_k u^k / (k + 2)
    return 0.5 + u * (1.0 / 3.0 + u * (0.25 + u * 0.2));
  }
  return (-std::log1p(-u) - u) / (u * u);
}

double kappa(double x) {
  if (std::fabs(x) < kSeriesThreshold) {
    // sum_k x^k / (k + 2)!
    return 0.5 + x * (1.0 / 6.0 + x * (1.0 / 24.0 + x * (1.0 / 120.0)));
  }
  return (std::expm1(x) - x) / (x * x);
}

double c_eta(double eta, double b) {
  if (!(eta > 0.0) || !(b > 0.0) || eta * b >= 1.0) {
    throw DomainError("c_eta: requires 0 < eta < 1/b");
  }
  return eta * theta(eta * b);
}

double s_eta(double eta, double b) {
  if (!(eta > 0.0) || !(b >= 0.0)) {
    throw DomainError("s_eta: requires eta > 0 and b >= 0");
  }
  return eta * kappa(eta * b);
}

double binary_kl(double q, double p) {
  if (!(q >= 0.0 && q <= 1.0) || !(p >= 0.0 && p <= 1.0)) {
    throw DomainError("binary_kl: arguments must lie in [0, 1]");
  }
  return xlogy_ratio(q, p) + xlogy_ratio(1.0 - q, 1.0 - p);
}

double invert_kl_upper(double q_hat, double budget) {
  if (!(q_hat >= 0.0 && q_hat <= 1.0)) {
    throw DomainError("invert_kl_upper: q_hat must lie in [0, 1]");
  }
  if (!(budget >= 0.0)) {
    throw DomainError("invert_kl_upper: budget must be nonnegative");
  }
  if (budget == 0.0 || q_hat == 1.0) return q_hat;
  if (std::isinf(budget)) return 1.0;
  if (binary_kl(q_hat, std::nextafter(1.0, 0.0)) <= budget) return 1.0;

  // kl(q_hat || .) is increasing on [q_hat, 1]; keep kl(q_hat || lo) <= budget.
  // Bisection runs well past kKlTolerance, until the midpoint stops moving.
  double lo = q_hat;
  double hi = 1.0;
  for (int it = 0; it < kKlMaxIterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (binary_kl(q_hat, mid) <= budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double relaxed_kl_upper(double q_hat, double budget) {
  if (!(q_hat >= 0.0 && q_hat <= 1.0) || !(budget >= 0.0)) {
    throw DomainError("relaxed_kl_upper: requires q_hat in [0, 1], budget >= 0");
  }
  return q_hat + std::sqrt(2.0 * q_hat * budget) + 2.0 * budget;
}

EtaGrid build_eta_grid(std::size_t n, double delta, double b) {
  if (n == 0) throw DomainError("build_eta_grid: n must be positive");
  require_probability(delta, "build_eta_grid: delta");
  if (!(b > 0.0)) throw DomainError("build_eta_grid: b must be positive");
  const double k = std::ceil(
      std::log2(0.5 * std::sqrt(static_cast<double>(n) / std::log(1.0 / delta))));
  return geometric_grid(clamped_grid_size(k), b);
}

EtaGrid build_mean_grid(std::size_t n, double delta) {
  if (n == 0) throw DomainError("build_mean_grid: n must be positive");
  require_probability(delta, "build_mean_grid: delta");
  const double k = std::ceil(
      std::log2(std::sqrt(static_cast<double>(n) / (2.0 * std::log(2.0 / delta)))));
  return geometric_grid(clamped_grid_size(k), 1.0);
}

double gaussian_kl(const Eigen::Ref<const Eigen::VectorXd>& mean1, double var1,
                   const Eigen::Ref<const Eigen::VectorXd>& mean2, double var2) {
  if (mean1.size() != mean2.size()) {
    throw DomainError("gaussian_kl: dimension mismatch");
  }
  if (!(var1 > 0.0) || !(var2 > 0.0)) {
    throw DomainError("gaussian_kl: variances must be positive");
  }
  const double d = static_cast<double>(mean1.size());
  const double ratio = var1 / var2;
  const double shape = (ratio - 1.0) - std::log(ratio);
  return 0.5 * d * shape + (mean1 - mean2).squaredNorm() / (2.0 * var2);
}

Thm3Constants thm3_constants(double eta, double b, std::size_t m) {
  if (m < 2) throw DomainError("thm3_constants: m must be at least 2");
  if (!(eta > 0.0) || !(b > 0.0) || eta * b >= 1.0) {
    throw DomainError("thm3_constants: requires 0 < eta < 1/b");
  }
  const double md = static_cast<double>(m);
  const double r = md / (2.0 * md - 2.0);
  Thm3Constants out;
  out.m = m;
  out.eta = eta;
  out.tilde_c = s_eta(eta, b) * r / (1.0 + eta * r);
  out.beta_eta = eta + eta * eta * r;
  out.lambda_eta = eta * out.beta_eta / (eta + out.beta_eta);
  return out;
}

}  // namespace pacbayes
