#include "pacbayes/esi_verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "pacbayes/errors.hpp"

namespace pacbayes::esi {
namespace {

constexpr double kLogSpaceThreshold = 700.0;
constexpr double kWitnessExcess = 1e-15;
constexpr double kMassTolerance = 1e-12;

// Accumulates sum_i p_i exp(a_i) for a probability vector p. Away from
// overflow the excess over 1 is accumulated as sum_i p_i expm1(a_i), which
// keeps full relative precision when the mgf is within a few ulps of 1.
class MgfAccumulator {
 public:
  void add(double mass, double exponent) {
    if (mass == 0.0) return;
    masses_.push_back(mass);
    exponents_.push_back(exponent);
  }

  [[nodiscard]] EsiCheckResult finish() const {
    EsiCheckResult out;
    const double top = exponents_.empty()
                           ? 0.0
                           : *std::max_element(exponents_.begin(), exponents_.end());
    double excess = 0.0;
    if (top > kLogSpaceThreshold) {
      long double acc = 0.0L;
      for (std::size_t i = 0; i < masses_.size(); ++i) {
        acc += static_cast<long double>(masses_[i]) *
               std::exp(static_cast<long double>(exponents_[i] - top));
      }
      const double log_mgf = top + static_cast<double>(std::log(acc));
      out.mgf_value = std::exp(log_mgf);
      excess = out.mgf_value - 1.0;
    } else {
      long double acc = -1.0L;
      for (std::size_t i = 0; i < masses_.size(); ++i) {
        acc += static_cast<long double>(masses_[i]);
        acc += static_cast<long double>(masses_[i]) *
               static_cast<long double>(std::expm1(exponents_[i]));
      }
      excess = static_cast<double>(acc);
      out.mgf_value = 1.0 + excess;
    }
    out.margin = -excess;
    out.holds = excess <= kVerdictTolerance;
    return out;
  }

 private:
  std::vector<double> masses_;
  std::vector<double> exponents_;
};

// Visits every atom of the product measure of `dists`, passing the index
// tuple and the product mass.
template <typename Visitor>
void for_each_product_atom(std::span<const DiscreteDistribution> dists, Visitor&& visit) {
  std::vector<std::size_t> idx(dists.size(), 0);
  while (true) {
    double mass = 1.0;
    for (std::size_t k = 0; k < dists.size(); ++k) mass *= dists[k].atoms()[idx[k]].mass;
    visit(std::span<const std::size_t>(idx), mass);
    std::size_t k = 0;
    for (; k < dists.size(); ++k) {
      if (++idx[k] < dists[k].size()) break;
      idx[k] = 0;
    }
    if (k == dists.size()) return;
  }
}

std::size_t product_size(std::span<const DiscreteDistribution> dists) {
  std::size_t total = 1;
  for (const auto& d : dists) {
    if (total > kMaxProductAtoms / d.size()) return kMaxProductAtoms + 1;
    total *= d.size();
  }
  return total;
}

const Transform& pick(std::span<const Transform> transforms, std::size_t i) {
  return transforms.size() == 1 ? transforms[0] : transforms[i];
}

void require_transform_count(std::span<const Transform> transforms, std::size_t n,
                             const char* who) {
  if (transforms.size() != 1 && transforms.size() != n) {
    throw DomainError(std::string(who) + ": need one transform or one per factor");
  }
}

void require_probability_vector(std::span<const double> w, const char* who) {
  double total = 0.0;
  for (double x : w) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw DomainError(std::string(who) + ": weights must be finite and nonnegative");
    }
    total += x;
  }
  if (std::fabs(total - 1.0) > kMassTolerance) {
    throw DomainError(std::string(who) + ": weights must sum to 1");
  }
}

}  // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw DomainError("DiscreteDistribution: at least one atom required");
  double total = 0.0;
  for (const auto& a : atoms_) {
    if (!std::isfinite(a.value)) throw DomainError("DiscreteDistribution: non-finite atom");
    if (!(a.mass >= 0.0)) throw DomainError("DiscreteDistribution: negative mass");
    total += a.mass;
  }
  if (std::fabs(total - 1.0) > kMassTolerance) {
    throw DomainError("DiscreteDistribution: masses must sum to 1");
  }
  min_value_ = atoms_.front().value;
  max_value_ = atoms_.front().value;
  for (auto& a : atoms_) {
    a.mass /= total;
    mean_ += a.mass * a.value;
    second_moment_ += a.mass * a.value * a.value;
    min_value_ = std::min(min_value_, a.value);
    max_value_ = std::max(max_value_, a.value);
  }
}

DiscreteDistribution DiscreteDistribution::point_mass(double value) {
  return DiscreteDistribution({{value, 1.0}});
}

DiscreteDistribution DiscreteDistribution::two_point(double low, double high,
                                                     double mass_on_high) {
  return DiscreteDistribution({{low, 1.0 - mass_on_high}, {high, mass_on_high}});
}

EsiCheckResult esi_mgf(const DiscreteDistribution& dist, double eta, const Transform& transform) {
  if (!(eta > 0.0)) throw DomainError("esi_mgf: eta must be positive");
  MgfAccumulator acc;
  for (const auto& a : dist.atoms()) {
    acc.add(a.mass, eta * transform(a.value, dist.mean(), dist.second_moment()));
  }
  return acc.finish();
}

Transform unexpected_bernstein_transform(double c) {
  return [c](double x, double mean, double) { return mean - x - c * x * x; };
}

Transform standard_bernstein_transform(double s) {
  return [s](double x, double mean, double second) { return mean - x - s * second; };
}

EsiCheckResult check_unexpected_bernstein(const DiscreteDistribution& dist, double eta, double c) {
  if (!(c >= 0.0)) throw DomainError("check_unexpected_bernstein: c must be nonnegative");
  if (dist.max_value() > 0.0 && eta * dist.max_value() >= 1.0) {
    throw DomainError("check_unexpected_bernstein: requires eta * max(X) < 1");
  }
  return esi_mgf(dist, eta, unexpected_bernstein_transform(c));
}

EsiCheckResult check_standard_bernstein(const DiscreteDistribution& dist, double eta, double s) {
  if (!(s >= 0.0)) throw DomainError("check_standard_bernstein: s must be nonnegative");
  return esi_mgf(dist, eta, standard_bernstein_transform(s));
}

std::optional<DiscreteDistribution> find_tightness_witness(double eta, double b, double c) {
  if (!(eta > 0.0) || !(b > 0.0) || eta * b >= 1.0) {
    throw DomainError("find_tightness_witness: requires 0 < eta b < 1");
  }
  for (int k = 1; k <= 12; ++k) {
    const double mass_on_b = std::pow(10.0, -k);
    auto dist = DiscreteDistribution::two_point(0.0, b, mass_on_b);
    if (check_unexpected_bernstein(dist, eta, c).margin < -kWitnessExcess) return dist;
  }
  return std::nullopt;
}

double chained_rate(std::span<const double> gammas) {
  if (gammas.empty()) throw DomainError("chained_rate: no rates");
  double inv = 0.0;
  for (double g : gammas) {
    if (!(g > 0.0)) throw DomainError("chained_rate: rates must be positive");
    inv += 1.0 / g;
  }
  return 1.0 / inv;
}

EsiCheckResult check_esi_chain(std::span<const DiscreteDistribution> dists,
                               std::span<const double> gammas,
                               std::span<const Transform> transforms) {
  if (dists.empty() || dists.size() != gammas.size()) {
    throw DomainError("check_esi_chain: need one rate per distribution");
  }
  require_transform_count(transforms, dists.size(), "check_esi_chain");
  for (std::size_t i = 0; i < dists.size(); ++i) {
    if (!esi_mgf(dists[i], gammas[i], pick(transforms, i)).holds) {
      throw DomainError("check_esi_chain: factor " + std::to_string(i) +
                        " fails its own ESI");
    }
  }
  if (product_size(dists) > kMaxProductAtoms) {
    throw DomainError("check_esi_chain: product support exceeds 10^6 atoms");
  }
  const double nu = chained_rate(gammas);

  // Transform values per factor and atom, computed once.
  std::vector<std::vector<double>> z(dists.size());
  for (std::size_t i = 0; i < dists.size(); ++i) {
    const auto& d = dists[i];
    for (const auto& a : d.atoms()) {
      z[i].push_back(pick(transforms, i)(a.value, d.mean(), d.second_moment()));
    }
  }
  MgfAccumulator acc;
  for_each_product_atom(dists, [&](std::span<const std::size_t> idx, double mass) {
    double sum = 0.0;
    for (std::size_t i = 0; i < idx.size(); ++i) sum += z[i][idx[i]];
    acc.add(mass, nu * sum);
  });
  return acc.finish();
}

EsiCheckResult check_pac_bayes_esi(std::span<const DiscreteDistribution> hypothesis_dists,
                                   std::span<const double> prior,
                                   std::span<const double> posterior, double eta,
                                   std::span<const Transform> transforms) {
  const std::size_t k = hypothesis_dists.size();
  if (k == 0 || prior.size() != k || posterior.size() != k) {
    throw DomainError("check_pac_bayes_esi: prior, posterior and hypotheses must align");
  }
  require_transform_count(transforms, k, "check_pac_bayes_esi");
  require_probability_vector(prior, "check_pac_bayes_esi prior");
  require_probability_vector(posterior, "check_pac_bayes_esi posterior");
  for (std::size_t h = 0; h < k; ++h) {
    if (!esi_mgf(hypothesis_dists[h], eta, pick(transforms, h)).holds) {
      throw DomainError("check_pac_bayes_esi: hypothesis " + std::to_string(h) +
                        " fails its own ESI");
    }
  }

  double kl = 0.0;
  for (std::size_t h = 0; h < k; ++h) {
    if (posterior[h] == 0.0) continue;
    if (prior[h] == 0.0) {
      EsiCheckResult out;
      out.mgf_value = 0.0;
      out.margin = 1.0;
      out.holds = true;
      out.vacuous = true;
      return out;
    }
    kl += posterior[h] * std::log(posterior[h] / prior[h]);
  }
  if (product_size(hypothesis_dists) > kMaxProductAtoms) {
    throw DomainError("check_pac_bayes_esi: product support exceeds 10^6 atoms");
  }

  std::vector<std::vector<double>> y(k);
  for (std::size_t h = 0; h < k; ++h) {
    const auto& d = hypothesis_dists[h];
    for (const auto& a : d.atoms()) {
      y[h].push_back(pick(transforms, h)(a.value, d.mean(), d.second_moment()));
    }
  }
  MgfAccumulator acc;
  for_each_product_atom(hypothesis_dists, [&](std::span<const std::size_t> idx, double mass) {
    double avg = 0.0;
    for (std::size_t h = 0; h < k; ++h) avg += posterior[h] * y[h][idx[h]];
    acc.add(mass, eta * avg - kl);
  });
  return acc.finish();
}

bool check_grid_mixture(const EtaGrid& grid, std::span<const double> per_eta_mgfs) {
  if (grid.size() != per_eta_mgfs.size()) {
    throw DomainError("check_grid_mixture: one mgf per grid point required");
  }
  double mix = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) mix += grid.prior_weights[i] * per_eta_mgfs[i];
  return mix <= 1.0 + kVerdictTolerance;
}

double empirical_bernstein_mean_bound(std::span<const double> samples, double delta) {
  if (samples.empty()) throw DomainError("empirical_bernstein_mean_bound: empty sample");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("empirical_bernstein_mean_bound: delta must lie in ]0, 1[");
  }
  for (double z : samples) {
    if (!(z >= 0.0 && z <= 1.0)) {
      throw DomainError("empirical_bernstein_mean_bound: samples must lie in [0, 1]");
    }
  }
  const auto n = static_cast<double>(samples.size());
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double var = 0.0;
  for (double z : samples) var += (z - mean) * (z - mean);
  var /= n;

  const EtaGrid grid = build_mean_grid(samples.size(), delta);
  const double log_term = std::log(2.0 * static_cast<double>(grid.size()) / delta);
  const double adaptive =
      3.0 * std::sqrt(var * log_term / (2.0 * n)) + 11.0 * log_term / (10.0 * n);
  const double fallback = 11.0 * log_term / (4.0 * n);
  const double c_half = theta(0.5) / 2.0;
  return std::max(adaptive, fallback) + c_half * std::log(2.0 / delta) / (2.0 * n);
}

DiscreteDistribution random_distribution(std::mt19937_64& rng, std::size_t atoms, double lo,
                                         double hi) {
  std::uniform_real_distribution<double> value(lo, hi);
  std::exponential_distribution<double> gamma1(1.0);
  std::vector<Atom> out(atoms);
  double total = 0.0;
  for (auto& a : out) {
    a.value = value(rng);
    a.mass = gamma1(rng);
    total += a.mass;
  }
  for (auto& a : out) a.mass /= total;
  return DiscreteDistribution(std::move(out));
}

namespace {

constexpr std::array<double, 3> kLossBounds = {0.5, 1.0, 2.0};

struct CorpusCase {
  DiscreteDistribution dist;
  double b;
};

// 2..8 atoms in [-5, b]; every other case pins one atom at b exactly, where
// the un-expected Bernstein inequality is tightest.
CorpusCase corpus_case(std::mt19937_64& rng, std::size_t i, double b) {
  std::uniform_int_distribution<std::size_t> count(2, 8);
  auto dist = random_distribution(rng, count(rng), -5.0, b);
  if (i % 2 == 1) {
    auto atoms = dist.atoms();
    atoms.front().value = b;
    dist = DiscreteDistribution(std::move(atoms));
  }
  return {std::move(dist), b};
}

CorpusCase corpus_case(std::mt19937_64& rng, std::size_t i) {
  return corpus_case(rng, i, kLossBounds[i % kLossBounds.size()]);
}

void record(SuiteResult& suite, const EsiCheckResult& r, bool& failed) {
  suite.worst_slack = std::min(suite.worst_slack, r.margin);
  if (!r.holds) failed = true;
}

}  // namespace

SuiteResult unexpected_bernstein_suite(std::size_t cases, std::uint64_t seed) {
  SuiteResult suite{"unexpected-bernstein", 0, 0, 1.0};
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < cases; ++i) {
    const auto c = corpus_case(rng, i);
    bool failed = false;
    for (double eta : build_eta_grid(1000, 0.05, c.b).points) {
      record(suite, check_unexpected_bernstein(c.dist, eta, c_eta(eta, c.b)), failed);
    }
    ++suite.cases;
    if (failed) ++suite.failures;
  }
  return suite;
}

SuiteResult standard_bernstein_suite(std::size_t cases, std::uint64_t seed) {
  SuiteResult suite{"standard-bernstein", 0, 0, 1.0};
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < cases; ++i) {
    const auto c = corpus_case(rng, i);
    const double b_low = std::fabs(c.dist.min_value());
    bool failed = false;
    for (double eta : build_eta_grid(1000, 0.05, c.b).points) {
      record(suite, check_standard_bernstein(c.dist, eta, s_eta(eta, b_low)), failed);
    }
    ++suite.cases;
    if (failed) ++suite.failures;
  }
  return suite;
}

SuiteResult tightness_suite() {
  SuiteResult suite{"tightness", 0, 0, 1.0};
  constexpr std::array<double, 5> kScaled = {0.05, 0.1, 0.25, 0.5, 0.9};
  for (double b : kLossBounds) {
    for (double u : kScaled) {
      const double eta = u / b;
      const double c = 0.9 * c_eta(eta, b);
      ++suite.cases;
      const auto witness = find_tightness_witness(eta, b, c);
      if (!witness) {
        ++suite.failures;
        continue;
      }
      const auto r = check_unexpected_bernstein(*witness, eta, c);
      suite.worst_slack = std::min(suite.worst_slack, -r.margin);
      if (r.mgf_value - 1.0 < kVerdictTolerance) ++suite.failures;
    }
  }
  return suite;
}

SuiteResult chain_suite(std::size_t cases, std::uint64_t seed) {
  SuiteResult suite{"esi-chain", 0, 0, 1.0};
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < cases; ++i) {
    std::vector<DiscreteDistribution> dists;
    std::vector<double> gammas;
    std::vector<Transform> transforms;
    for (std::size_t j = 0; j < 3; ++j) {
      auto c = corpus_case(rng, 3 * i + j);
      const auto grid = build_eta_grid(1000, 0.05, c.b);
      std::uniform_int_distribution<std::size_t> pick_eta(0, grid.size() - 1);
      const double gamma = grid.points[pick_eta(rng)];
      dists.push_back(std::move(c.dist));
      gammas.push_back(gamma);
      transforms.push_back(unexpected_bernstein_transform(c_eta(gamma, c.b)));
    }
    bool failed = false;
    record(suite, check_esi_chain(dists, gammas, transforms), failed);
    ++suite.cases;
    if (failed) ++suite.failures;
  }
  return suite;
}

SuiteResult pac_bayes_suite(std::size_t cases, std::uint64_t seed) {
  SuiteResult suite{"pac-bayes", 0, 0, 1.0};
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> gamma1(1.0);
  auto dirichlet = [&](std::size_t k) {
    std::vector<double> w(k);
    double total = 0.0;
    for (auto& x : w) total += (x = gamma1(rng));
    for (auto& x : w) x /= total;
    return w;
  };
  for (std::size_t i = 0; i < cases; ++i) {
    const double b = kLossBounds[i % kLossBounds.size()];
    const auto grid = build_eta_grid(1000, 0.05, b);
    const double eta = grid.points[i % grid.size()];
    std::vector<DiscreteDistribution> dists;
    for (std::size_t h = 0; h < 3; ++h) dists.push_back(corpus_case(rng, 3 * i + h, b).dist);
    const Transform transform = unexpected_bernstein_transform(c_eta(eta, b));
    const auto prior = dirichlet(3);
    const auto posterior = (i % 10 == 0) ? prior : dirichlet(3);
    bool failed = false;
    record(suite,
           check_pac_bayes_esi(dists, prior, posterior, eta, std::span(&transform, 1)),
           failed);
    ++suite.cases;
    if (failed) ++suite.failures;
  }
  return suite;
}

SuiteResult grid_mixture_suite(std::size_t cases, std::uint64_t seed) {
  SuiteResult suite{"grid-mixture", 0, 0, 1.0};
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < cases; ++i) {
    const auto c = corpus_case(rng, i);
    const auto grid = build_eta_grid(1000, 0.05, c.b);
    std::vector<double> mgfs;
    for (double eta : grid.points) {
      mgfs.push_back(check_unexpected_bernstein(c.dist, eta, c_eta(eta, c.b)).mgf_value);
    }
    double mixture = 0.0;
    for (std::size_t k = 0; k < mgfs.size(); ++k) mixture += grid.prior_weights[k] * mgfs[k];
    suite.worst_slack = std::min(suite.worst_slack, 1.0 - mixture);
    ++suite.cases;
    if (!check_grid_mixture(grid, mgfs)) ++suite.failures;
  }
  return suite;
}

}  // namespace pacbayes::esi
