#include "pacbayes/bounds.hpp"

#include <cmath>
#include <limits>

#include "pacbayes/errors.hpp"

namespace pacbayes {
namespace {

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in ]0, 1[");
}

void check_nonnegative(double value, const char* what) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(what) + " must be finite and nonnegative");
  }
}

struct ScanResult {
  double point = 0.0;
  double value = std::numeric_limits<double>::infinity();
};

// Minimizes term(i) over the grid. Points are stored in decreasing order, so
// keeping the first strict minimum breaks ties toward the larger point.
template <typename Term>
ScanResult scan_grid(const EtaGrid& grid, Term term) {
  ScanResult best;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double value = term(i);
    if (value < best.value) {
      best.value = value;
      best.point = grid.points[i];
    }
  }
  return best;
}

void check_grid(const EtaGrid& grid) {
  if (grid.empty()) throw DomainError("empty learning-rate grid");
  if (grid.points.size() != grid.prior_weights.size()) {
    throw DomainError("grid points and weights differ in length");
  }
}

}  // namespace

double comp_informed(const IsotropicGaussian& posterior, const IsotropicGaussian& prior_first_half,
                     const IsotropicGaussian& prior_second_half) {
  posterior.validate();
  prior_first_half.validate();
  prior_second_half.validate();
  return gaussian_kl(posterior.mean, posterior.variance, prior_first_half.mean,
                     prior_first_half.variance) +
         gaussian_kl(posterior.mean, posterior.variance, prior_second_half.mean,
                     prior_second_half.variance);
}

BoundComponents main_bound(double empirical_loss, double v_n, double v_n_prime, double comp_n,
                           std::size_t n, double delta, const EtaGrid& grid) {
  check_grid(grid);
  check_delta(delta);
  if (n == 0) throw DomainError("main_bound: n must be positive");
  check_nonnegative(empirical_loss, "empirical loss");
  check_nonnegative(v_n, "V_n");
  check_nonnegative(v_n_prime, "V'_n");
  check_nonnegative(comp_n, "comp_n");

  const double b = grid.loss_bound;
  const double nd = static_cast<double>(n);
  const auto log_term = [&](std::size_t i) { return std::log(1.0 / (delta * grid.prior_weights[i])); };

  const ScanResult eta = scan_grid(grid, [&](std::size_t i) {
    const double e = grid.points[i];
    return c_eta(e, b) * v_n + (comp_n + 2.0 * log_term(i)) / (e * nd);
  });
  const ScanResult nu = scan_grid(grid, [&](std::size_t i) {
    const double e = grid.points[i];
    return c_eta(e, b) * v_n_prime + log_term(i) / (e * nd);
  });

  BoundComponents out;
  out.empirical_loss = empirical_loss;
  out.v_n = v_n;
  out.v_n_prime = v_n_prime;
  out.comp_n = comp_n;
  out.eta_star = eta.point;
  out.nu_star = nu.point;
  out.eta_term = eta.value;
  out.nu_term = nu.value;
  out.delta = delta;
  out.n = n;
  out.m = n / 2;
  out.b = b;
  out.total = empirical_loss + eta.value + nu.value;
  return out;
}

double maurer_budget(double kl_complexity, std::size_t n, double delta) {
  check_delta(delta);
  check_nonnegative(kl_complexity, "KL complexity");
  if (n < 8) throw DomainError("maurer_bound requires n >= 8");
  const double nd = static_cast<double>(n);
  return (kl_complexity + std::log(2.0 * std::sqrt(nd) / delta)) / nd;
}

double maurer_bound(double empirical_loss, double kl_complexity, std::size_t n, double delta) {
  return invert_kl_upper(empirical_loss, maurer_budget(kl_complexity, n, delta));
}

double maurer_informed_budget(double comp_n, std::size_t n, std::size_t m, double delta) {
  check_delta(delta);
  check_nonnegative(comp_n, "comp_n");
  if (m < 1 || m + 1 > n) throw DomainError("maurer_informed_bound requires 1 <= m <= n - 1");
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  return (comp_n + std::log(4.0 * std::sqrt(md * (nd - md)) / delta)) / nd;
}

double maurer_informed_bound(double empirical_loss, double comp_n, std::size_t n, std::size_t m,
                             double delta) {
  return invert_kl_upper(empirical_loss, maurer_informed_budget(comp_n, n, m, delta));
}

InformedCombination informed_combine(const SliceEvaluator& evaluate, double p_constant,
                                     double a_constant, std::size_t n, std::size_t m,
                                     double delta) {
  check_delta(delta);
  check_nonnegative(p_constant, "P constant");
  check_nonnegative(a_constant, "A constant");
  if (m < 1 || m + 1 > n) throw DomainError("informed_combine requires 1 <= m <= n - 1");

  InformedCombination out;
  out.first = evaluate(Half::first, m, delta / 2.0);
  out.second = evaluate(Half::second, n - m, delta / 2.0);
  for (const SliceTerms* s : {&out.first, &out.second}) {
    check_nonnegative(s->empirical_loss, "slice empirical loss");
    check_nonnegative(s->kl, "slice KL");
    check_nonnegative(s->epsilon, "slice epsilon");
  }

  const double nd = static_cast<double>(n);
  const double p = static_cast<double>(m) / nd;
  const double q = 1.0 - p;
  const auto single = [&](const SliceTerms& s, double size) {
    const double x = s.kl + s.epsilon;
    return s.empirical_loss + p_constant * std::sqrt(s.empirical_loss * x / size) +
           a_constant * x / size;
  };

  out.empirical_loss = p * out.first.empirical_loss + q * out.second.empirical_loss;
  out.epsilon_bar = out.first.epsilon + out.second.epsilon;
  out.weighted_total = p * single(out.first, static_cast<double>(m)) +
                       q * single(out.second, static_cast<double>(n - m));
  const double x = out.first.kl + out.second.kl + out.epsilon_bar;
  out.total = out.empirical_loss + p_constant * std::sqrt(2.0 * out.empirical_loss * x / nd) +
              a_constant * x / nd;
  return out;
}

Thm3Components thm3_bound(double empirical_loss, double g_n, double g_n_prime, double comp_n,
                          std::size_t n, std::size_t m, double delta, const EtaGrid& grid) {
  check_grid(grid);
  check_delta(delta);
  if (n % 2 != 0 || m * 2 != n) throw DomainError("thm3_bound requires n even and m = n/2");
  if (m <= 1) throw DomainError("thm3_bound requires m > 1");
  check_nonnegative(empirical_loss, "empirical loss");
  check_nonnegative(g_n, "G_n");
  check_nonnegative(g_n_prime, "G'_n");
  check_nonnegative(comp_n, "comp_n");

  const double nd = static_cast<double>(n);
  std::vector<Thm3Constants> constants;
  constants.reserve(grid.size());
  for (double e : grid.points) constants.push_back(thm3_constants(e, grid.loss_bound, m));
  const auto log_term = [&](std::size_t i) { return std::log(1.0 / (delta * grid.prior_weights[i])); };

  const ScanResult eta = scan_grid(grid, [&](std::size_t i) {
    return constants[i].tilde_c * g_n + (comp_n + 2.0 * log_term(i)) / (constants[i].lambda_eta * nd);
  });
  const ScanResult nu = scan_grid(grid, [&](std::size_t i) {
    return constants[i].tilde_c * g_n_prime + log_term(i) / (constants[i].lambda_eta * nd);
  });

  Thm3Components out;
  out.empirical_loss = empirical_loss;
  out.g_n = g_n;
  out.g_n_prime = g_n_prime;
  out.comp_n = comp_n;
  out.eta_star = eta.point;
  out.nu_star = nu.point;
  out.eta_term = eta.value;
  out.nu_term = nu.value;
  out.delta = delta;
  out.n = n;
  out.m = m;
  out.total = empirical_loss + eta.value + nu.value;
  return out;
}

double lemma2_rhs(double risk_first_half_estimator, double risk_second_half_estimator,
                  std::size_t n, double delta) {
  check_delta(delta);
  if (n == 0 || n % 2 != 0) throw DomainError("lemma2_rhs requires a positive even n");
  check_nonnegative(risk_first_half_estimator, "risk");
  check_nonnegative(risk_second_half_estimator, "risk");
  const double nd = static_cast<double>(n);
  return std::sqrt(2.0 * (risk_first_half_estimator + risk_second_half_estimator) / nd) +
         4.0 * std::sqrt(std::log(4.0 / delta)) / nd;
}

}  // namespace pacbayes
