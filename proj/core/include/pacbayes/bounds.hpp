#pragma once

#include <cstddef>
#include <functional>

#include "pacbayes/posteriors.hpp"
#include "pacbayes/scalar_math.hpp"

namespace pacbayes {

/// Every intermediate of one evaluation of the main (un-expected Bernstein)
/// bound.
struct BoundComponents {
  double empirical_loss = 0.0;
  double v_n = 0.0;
  double v_n_prime = 0.0;
  double comp_n = 0.0;
  double eta_star = 0.0;
  double nu_star = 0.0;
  double eta_term = 0.0;  // c_eta V_n + (comp_n + 2 ln(1/(delta pi))) / (eta n) at eta_star
  double nu_term = 0.0;   // c_nu V'_n + ln(1/(delta pi)) / (nu n) at nu_star
  double delta = 0.0;
  std::size_t n = 0;
  std::size_t m = 0;
  double b = 1.0;
  double total = 0.0;
};

/// Intermediates of the variance-based empirical Bernstein bound.
struct Thm3Components {
  double empirical_loss = 0.0;
  double g_n = 0.0;
  double g_n_prime = 0.0;
  double comp_n = 0.0;
  double eta_star = 0.0;
  double nu_star = 0.0;
  double eta_term = 0.0;
  double nu_term = 0.0;
  double delta = 0.0;
  std::size_t n = 0;
  std::size_t m = 0;
  double total = 0.0;
};

/// KL(posterior || prior_first_half) + KL(posterior || prior_second_half).
double comp_informed(const IsotropicGaussian& posterior, const IsotropicGaussian& prior_first_half,
                     const IsotropicGaussian& prior_second_half);

/// L_n + inf_eta {c_eta V_n + (comp_n + 2 ln(1/(delta pi(eta)))) / (eta n)}
///     + inf_nu  {c_nu V'_n + ln(1/(delta pi(nu))) / (nu n)}.
/// Both infima are exhaustive scans of `grid`; ties go to the larger point.
BoundComponents main_bound(double empirical_loss, double v_n, double v_n_prime, double comp_n,
                           std::size_t n, double delta, const EtaGrid& grid);

/// (kl_complexity + ln(2 sqrt(n) / delta)) / n.
double maurer_budget(double kl_complexity, std::size_t n, double delta);

/// Inverts kl(L_n || p) <= maurer_budget. Requires n >= 8.
double maurer_bound(double empirical_loss, double kl_complexity, std::size_t n, double delta);

/// (comp_n + ln(4 sqrt(m (n - m)) / delta)) / n.
double maurer_informed_budget(double comp_n, std::size_t n, std::size_t m, double delta);

/// Inverts kl(L_n || p) <= maurer_informed_budget. Requires 1 <= m <= n - 1.
double maurer_informed_bound(double empirical_loss, double comp_n, std::size_t n, std::size_t m,
                             double delta);

enum class Half { first, second };

/// What a bound of the form
///   L - R <= P sqrt(R (KL + eps) / k) + A (KL + eps) / k
/// needs from one half of the sample of size k: the half's empirical loss R,
/// the KL to the prior built from the other half, and eps at the given delta.
struct SliceTerms {
  double empirical_loss = 0.0;
  double kl = 0.0;
  double epsilon = 0.0;
};

using SliceEvaluator = std::function<SliceTerms(Half half, std::size_t slice_size, double delta)>;

struct InformedCombination {
  SliceTerms first;
  SliceTerms second;
  double empirical_loss = 0.0;  // p R_first + q R_second
  double epsilon_bar = 0.0;     // eps_{delta/2, m} + eps_{delta/2, n-m}
  double weighted_total = 0.0;  // p * (first-half bound) + q * (second-half bound)
  double total = 0.0;           // merged form with sqrt(x) + sqrt(y) <= sqrt(2(x + y))
};

/// Applies a single-sample bound to each half with the prior trained on the
/// other half, each at delta/2, and merges the two with weights p = m/n and
/// q = (n - m)/n.
InformedCombination informed_combine(const SliceEvaluator& evaluate, double p_constant,
                                     double a_constant, std::size_t n, std::size_t m,
                                     double delta);

/// L_n + inf_eta {tilde_c G_n + (comp_n + 2 ln(1/(delta pi))) / (lambda n)}
///     + inf_nu  {tilde_c G'_n + ln(1/(delta pi)) / (lambda n)}
/// with tilde_c and lambda from thm3_constants at b = grid.loss_bound.
/// Requires n even and m = n / 2 > 1.
Thm3Components thm3_bound(double empirical_loss, double g_n, double g_n_prime, double comp_n,
                          std::size_t n, std::size_t m, double delta, const EtaGrid& grid);

/// sqrt(2 (risk_first + risk_second) / n) + 4 sqrt(ln(4 / delta)) / n, for a
/// loss bounded by 1. Requires n even.
double lemma2_rhs(double risk_first_half_estimator, double risk_second_half_estimator,
                  std::size_t n, double delta);

/// Bound values are kept unclamped; this is for display.
inline double clamp_unit(double value) { return value < 0.0 ? 0.0 : (value > 1.0 ? 1.0 : value); }

}  // namespace pacbayes
