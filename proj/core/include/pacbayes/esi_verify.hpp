#pragma once

// Exact verification of exponential stochastic inequalities (ESIs) on
// finite-support distributions.
//
// X <=_eta Y means E[exp(eta (X - Y))] <= 1. Every check in this header
// evaluates that expectation exactly by summing over the atoms of the
// distributions involved, so verdicts are deterministic up to floating point.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pacbayes/scalar_math.hpp"

namespace pacbayes::esi {

/// Absolute slack on the mgf when deciding whether an ESI holds.
inline constexpr double kVerdictTolerance = 1e-12;

/// Largest product support enumerated by check_esi_chain.
inline constexpr std::size_t kMaxProductAtoms = 1'000'000;

struct Atom {
  double value = 0.0;
  double mass = 0.0;
};

/// A real-valued distribution with finitely many atoms.
///
/// Masses are validated to sum to one within 1e-12 and then renormalized.
class DiscreteDistribution {
 public:
  explicit DiscreteDistribution(std::vector<Atom> atoms);

  static DiscreteDistribution point_mass(double value);
  /// Atoms {low, high} with mass `mass_on_high` on `high`.
  static DiscreteDistribution two_point(double low, double high, double mass_on_high);

  [[nodiscard]] const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  [[nodiscard]] std::size_t size() const noexcept { return atoms_.size(); }
  [[nodiscard]] double mean() const noexcept { return mean_; }
  [[nodiscard]] double second_moment() const noexcept { return second_moment_; }
  [[nodiscard]] double min_value() const noexcept { return min_value_; }
  [[nodiscard]] double max_value() const noexcept { return max_value_; }

 private:
  std::vector<Atom> atoms_;
  double mean_ = 0.0;
  double second_moment_ = 0.0;
  double min_value_ = 0.0;
  double max_value_ = 0.0;
};

struct EsiCheckResult {
  double mgf_value = 1.0;
  bool holds = true;
  double margin = 0.0;  // 1 - mgf_value
  // Set when the inequality holds trivially (infinite KL complexity).
  bool vacuous = false;
};

/// The quantity inside the ESI as a function of (value, E[X], E[X^2]).
using Transform = std::function<double(double value, double mean, double second_moment)>;

/// Exact E[exp(eta * transform(X, E[X], E[X^2]))] and its <= 1 verdict.
EsiCheckResult esi_mgf(const DiscreteDistribution& dist, double eta, const Transform& transform);

/// E[X] - X <=_eta c X^2. Requires eta * max(X) < 1 when max(X) > 0.
EsiCheckResult check_unexpected_bernstein(const DiscreteDistribution& dist, double eta, double c);

/// E[X] - X <=_eta s E[X^2].
EsiCheckResult check_standard_bernstein(const DiscreteDistribution& dist, double eta, double s);

/// Searches distributions on {0, b} for one violating the un-expected
/// Bernstein ESI at multiplier c. Mass 1 - 10^-k sits on 0 for k = 1..12; the
/// first violation (mgf > 1 + 1e-15) is returned.
std::optional<DiscreteDistribution> find_tightness_witness(double eta, double b, double c);

/// Verifies sum_i Z_i <=_nu 0 with nu = (sum_i 1/gamma_i)^-1 over the product
/// measure of `dists`, where Z_i = transforms[i](X_i, ...). `transforms` holds
/// either one transform shared by all factors or one per factor. Each factor
/// must pass its own check at gamma_i; otherwise DomainError is thrown.
EsiCheckResult check_esi_chain(std::span<const DiscreteDistribution> dists,
                               std::span<const double> gammas,
                               std::span<const Transform> transforms);

/// Learning rate of a chained ESI: (sum_i 1/gamma_i)^-1.
double chained_rate(std::span<const double> gammas);

/// Verifies E_{h~posterior}[Y_h] <=_eta KL(posterior || prior) / eta, where
/// Y_h = transforms[h](X_h, ...) and X_h ~ hypothesis_dists[h] independently.
/// Each per-hypothesis ESI must hold at eta (DomainError otherwise).
EsiCheckResult check_pac_bayes_esi(std::span<const DiscreteDistribution> hypothesis_dists,
                                   std::span<const double> prior,
                                   std::span<const double> posterior, double eta,
                                   std::span<const Transform> transforms);

/// sum_eta pi(eta) mgf(eta) <= 1 + 1e-12.
bool check_grid_mixture(const EtaGrid& grid, std::span<const double> per_eta_mgfs);

/// Deviation bound on E[Z] - mean(Z) for samples in [0, 1], holding with
/// probability at least 1 - delta. Uses the variance-adaptive grid of
/// build_mean_grid.
double empirical_bernstein_mean_bound(std::span<const double> samples, double delta);

/// Transform for the un-expected Bernstein ESI: mean - x - c x^2.
Transform unexpected_bernstein_transform(double c);

/// Transform for the standard Bernstein ESI: mean - x - s E[X^2].
Transform standard_bernstein_transform(double s);

/// Random distribution with `atoms` atoms, values uniform on [lo, hi] and
/// Dirichlet(1) masses. Used by the verification suites.
DiscreteDistribution random_distribution(std::mt19937_64& rng, std::size_t atoms, double lo,
                                         double hi);

/// Outcome of one randomized verification suite.
struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  // Smallest slack seen in the direction the suite expects: 1 - mgf for
  // validity suites, mgf - 1 for the tightness suite. Negative means failure.
  double worst_slack = 1.0;
  [[nodiscard]] bool passed() const noexcept { return cases > 0 && failures == 0; }
};

/// Un-expected Bernstein at c = c_eta(eta, b) on `cases` random distributions
/// with 2..8 atoms in [-5, b], b in {0.5, 1, 2}, every eta of
/// build_eta_grid(1000, 0.05, b).
SuiteResult unexpected_bernstein_suite(std::size_t cases, std::uint64_t seed);

/// Standard Bernstein at s = s_eta(eta, |min X|) on the same corpus.
SuiteResult standard_bernstein_suite(std::size_t cases, std::uint64_t seed);

/// For each (eta b, b) on a 5 x 3 grid, a witness must exist at
/// c = 0.9 c_eta and violate the ESI by at least 1e-12.
SuiteResult tightness_suite();

/// Chained un-expected Bernstein checks on random triples.
SuiteResult chain_suite(std::size_t cases, std::uint64_t seed);

/// PAC-Bayes ESI on random 3-hypothesis families with random prior/posterior.
SuiteResult pac_bayes_suite(std::size_t cases, std::uint64_t seed);

/// Grid mixture of verified per-eta mgfs.
SuiteResult grid_mixture_suite(std::size_t cases, std::uint64_t seed);

}  // namespace pacbayes::esi
