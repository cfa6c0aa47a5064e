#include "pacbayes/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include <spdlog/spdlog.h>

#include "pacbayes/errors.hpp"
#include "pacbayes/posteriors.hpp"
#include "pacbayes/seeds.hpp"

namespace pacbayes {

std::string_view to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::main:
      return "main";
    case BoundKind::maurer:
      return "maurer";
    case BoundKind::maurer_informed:
      return "maurer_informed";
    case BoundKind::thm3:
      return "thm3";
  }
  return "unknown";
}

std::string_view to_string(PriorMode mode) {
  return mode == PriorMode::informed ? "informed" : "uninformed";
}

BoundKind parse_bound_kind(std::string_view name) {
  for (BoundKind kind : all_bound_kinds()) {
    if (to_string(kind) == name) return kind;
  }
  throw DomainError("unknown bound '" + std::string(name) + "'");
}

PriorMode parse_prior_mode(std::string_view name) {
  if (name == "informed") return PriorMode::informed;
  if (name == "uninformed") return PriorMode::uninformed;
  throw DomainError("unknown prior mode '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in ]0, 1[");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be >= 0");
  if (!(prior_variance > 0.0) || !std::isfinite(prior_variance)) {
    throw DomainError("prior variance must be positive");
  }
  if (mc_samples == 0) throw DomainError("mc_samples must be >= 1");
  if (runs == 0) throw DomainError("runs must be >= 1");
  if (bounds.empty()) throw DomainError("no bound enabled");
  for (auto it = bounds.begin(); it != bounds.end(); ++it) {
    if (std::find(std::next(it), bounds.end(), *it) != bounds.end()) {
      throw DomainError("bound '" + std::string(to_string(*it)) + "' listed twice");
    }
  }
  if (max_iters <= 0) throw DomainError("max_iters must be positive");
  if (!(grad_tolerance > 0.0)) throw DomainError("grad_tolerance must be positive");
  if (synthetic_test_size == 0) throw DomainError("synthetic_test_size must be positive");
}

bool ExperimentConfig::enabled(BoundKind kind) const {
  return std::find(bounds.begin(), bounds.end(), kind) != bounds.end();
}

std::size_t sigma_grid_size(std::size_t n) {
  if (n < 2) throw DomainError("sigma_grid_size requires n >= 2");
  std::size_t j = 0;
  while ((std::size_t{1} << j) < n) ++j;
  return j;
}

std::vector<double> sigma_grid(std::size_t n) {
  const std::size_t j = sigma_grid_size(n);
  std::vector<double> out;
  out.reserve(j);
  for (std::size_t k = 1; k <= j; ++k) out.push_back(std::ldexp(1.0, -static_cast<int>(k)));
  return out;
}

const BoundEntry* BoundReport::find(BoundKind kind) const {
  for (const auto& entry : bounds) {
    if (entry.kind == kind) return &entry;
  }
  return nullptr;
}

double DatasetTestSet::error_of(const Hypothesis& h) const {
  return empirical_error(h, data_.features, data_.labels);
}

ExperimentOutcome run_experiment_detailed(const Dataset& train, const TestSet& test,
                                          const ExperimentConfig& config, std::size_t run) {
  config.validate();
  if (train.size() < 16) throw DomainError("run_experiment requires at least 16 training rows");
  const auto started = std::chrono::steady_clock::now();

  const HalfSplit halves = split_half(train);
  const std::size_t m = halves.m;
  const std::size_t n = 2 * m;
  std::vector<std::size_t> kept(n);
  for (std::size_t i = 0; i < n; ++i) kept[i] = i;
  const Dataset sample = halves.dropped_last_row ? train.subset(kept) : train;

  TrainOptions opts;
  opts.lambda = config.lambda;
  opts.max_iters = config.max_iters;
  opts.grad_tolerance = config.grad_tolerance;
  opts.seed = derive_seed(config.master_seed, n, run, SeedPurpose::training);

  ExperimentOutcome out;
  out.first_half = train_logistic(halves.first.features, halves.first.labels, opts);
  out.second_half = train_logistic(halves.second.features, halves.second.labels, opts);
  out.full = train_logistic(sample.features, sample.labels, opts);

  const Eigen::VectorXd ref =
      cross_fitted_losses(out.first_half, out.second_half, sample.features, sample.labels, m);
  const double v_prime = vn_prime(ref, m);
  const double g_prime = g_n_prime(ref, m);

  const std::vector<double> variances = sigma_grid(n);
  const double effective_delta = config.delta / static_cast<double>(variances.size());
  const EtaGrid grid = build_eta_grid(n, effective_delta, 1.0);

  const std::uint64_t mc_seed = derive_seed(config.master_seed, n, run, SeedPurpose::monte_carlo);
  const PosteriorSampler sampler(sample.features, sample.labels,
                                 McConfig{config.mc_samples, mc_seed});
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(out.full.weights.size());

  std::map<BoundKind, BoundEntry> best;
  for (BoundKind kind : config.bounds) {
    BoundEntry entry;
    entry.kind = kind;
    entry.value = std::numeric_limits<double>::infinity();
    best.emplace(kind, entry);
  }

  // Variances are scanned from largest to smallest and only a strict
  // improvement replaces the incumbent, so ties keep the larger variance.
  for (double sigma2 : variances) {
    const IsotropicGaussian posterior{out.full.weights, sigma2};
    const PosteriorStats stats = sampler.evaluate(posterior, m, ref);
    const double kl_to_origin =
        gaussian_kl(posterior.mean, sigma2, origin, config.prior_variance);
    const double comp = config.prior_mode == PriorMode::informed
                            ? comp_informed(posterior, IsotropicGaussian{out.first_half.weights, sigma2},
                                            IsotropicGaussian{out.second_half.weights, sigma2})
                            : 2.0 * kl_to_origin;

    for (auto& [kind, incumbent] : best) {
      BoundEntry cand;
      cand.kind = kind;
      cand.sigma2 = sigma2;
      cand.empirical_loss = stats.empirical_loss;
      cand.v_n = stats.v_n;
      cand.v_n_prime = v_prime;
      switch (kind) {
        case BoundKind::main: {
          const BoundComponents c =
              main_bound(stats.empirical_loss, stats.v_n, v_prime, comp, n, effective_delta, grid);
          cand.value = c.total;
          cand.comp_n = comp;
          cand.eta_star = c.eta_star;
          cand.nu_star = c.nu_star;
          cand.main = c;
          break;
        }
        case BoundKind::maurer:
          cand.value = maurer_bound(stats.empirical_loss, kl_to_origin, n, effective_delta);
          cand.comp_n = kl_to_origin;
          break;
        case BoundKind::maurer_informed:
          cand.value = maurer_informed_bound(stats.empirical_loss, comp, n, m, effective_delta);
          cand.comp_n = comp;
          break;
        case BoundKind::thm3: {
          const Thm3Components c = thm3_bound(stats.empirical_loss, stats.g_n, g_prime, comp, n,
                                               m, effective_delta, grid);
          cand.value = c.total;
          cand.comp_n = comp;
          cand.eta_star = c.eta_star;
          cand.nu_star = c.nu_star;
          cand.thm3 = c;
          break;
        }
      }
      if (cand.value < incumbent.value) incumbent = std::move(cand);
    }
  }

  BoundReport& report = out.report;
  report.dataset = train.name;
  report.n = n;
  report.d = train.dim();
  report.run = run;
  report.dropped_last_row = halves.dropped_last_row;
  report.config = config;
  report.sigma_grid_size = variances.size();
  report.effective_delta = effective_delta;
  report.v_n_prime = v_prime;
  report.g_n_prime = g_prime;
  report.seeds.monte_carlo = mc_seed;
  for (BoundKind kind : config.bounds) report.bounds.push_back(best.at(kind));

  const BoundEntry* headline = report.find(BoundKind::main);
  if (headline == nullptr) headline = &report.bounds.front();
  report.empirical_loss = headline->empirical_loss;
  report.v_n = headline->v_n;

  // The held-out data is touched only here, after every bound is fixed.
  report.test_error = test.error_of(out.full);

  if (config.record_timing) {
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  }
  spdlog::debug("{} n={} run={}: test error {:.4f}", report.dataset, n, run, report.test_error);
  return out;
}

BoundReport run_experiment(const Dataset& train, const TestSet& test,
                           const ExperimentConfig& config, std::size_t run) {
  return run_experiment_detailed(train, test, config, run).report;
}

std::vector<BoundReport> run_sweep(const SyntheticSpec& spec, const std::vector<std::size_t>& sizes,
                                   const ExperimentConfig& config) {
  config.validate();
  if (sizes.empty()) throw DomainError("run_sweep: no sample sizes");
  std::vector<BoundReport> reports;
  reports.reserve(sizes.size() * config.runs);
  for (std::size_t n : sizes) {
    for (std::size_t run = 0; run < config.runs; ++run) {
      SyntheticSpec train_spec = spec;
      train_spec.n = n;
      train_spec.seed = derive_seed(config.master_seed, n, run, SeedPurpose::data);
      SyntheticSpec test_spec = spec;
      test_spec.n = config.synthetic_test_size;
      test_spec.seed = derive_seed(config.master_seed, n, run, SeedPurpose::test_data);

      const Dataset train = gen_synthetic(train_spec);
      const Dataset test_data = gen_synthetic(test_spec);
      BoundReport report = run_experiment(train, DatasetTestSet(test_data), config, run);
      report.seeds.data = train_spec.seed;
      spdlog::info("synthetic n={} run {}/{} done", n, run + 1, config.runs);
      reports.push_back(std::move(report));
    }
  }
  return reports;
}

std::vector<BoundReport> run_folds(const Dataset& data, const ExperimentConfig& config) {
  config.validate();
  constexpr std::size_t kFolds = 5;
  const std::uint64_t fold_seed =
      derive_seed(config.master_seed, data.size(), 0, SeedPurpose::folds);
  const Dataset folded = data.fold_assignments ? data : make_folds(data, kFolds, fold_seed);
  std::vector<BoundReport> reports;
  for (std::size_t fold = 0; fold < kFolds; ++fold) {
    const auto [train, test] = fold_split(folded, static_cast<int>(fold));
    BoundReport report = run_experiment(train, DatasetTestSet(test), config, fold);
    report.seeds.data = fold_seed;
    spdlog::info("{} fold {}/{} done", data.name, fold + 1, kFolds);
    reports.push_back(std::move(report));
  }
  return reports;
}

MeanStderr mean_stderr(const std::vector<double>& values) {
  MeanStderr out;
  out.count = values.size();
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    const double var = ss / static_cast<double>(values.size() - 1);
    out.std_error = std::sqrt(var / static_cast<double>(values.size()));
  }
  return out;
}

std::vector<SweepSummaryRow> summarize(const std::vector<BoundReport>& reports) {
  using Key = std::tuple<std::string, std::size_t, BoundKind>;
  struct Samples {
    std::vector<double> value, test_error, empirical_loss, v_n, v_n_prime;
  };
  std::vector<Key> order;
  std::map<Key, Samples> groups;
  for (const auto& report : reports) {
    for (const auto& entry : report.bounds) {
      const Key key{report.dataset, report.n, entry.kind};
      auto [it, inserted] = groups.try_emplace(key);
      if (inserted) order.push_back(key);
      it->second.value.push_back(entry.value);
      it->second.test_error.push_back(report.test_error);
      it->second.empirical_loss.push_back(entry.empirical_loss);
      it->second.v_n.push_back(entry.v_n);
      it->second.v_n_prime.push_back(entry.v_n_prime);
    }
  }
  std::vector<SweepSummaryRow> rows;
  rows.reserve(order.size());
  for (const auto& key : order) {
    const Samples& s = groups.at(key);
    SweepSummaryRow row;
    row.dataset = std::get<0>(key);
    row.n = std::get<1>(key);
    row.kind = std::get<2>(key);
    row.value = mean_stderr(s.value);
    row.test_error = mean_stderr(s.test_error);
    row.empirical_loss = mean_stderr(s.empirical_loss);
    row.v_n = mean_stderr(s.v_n);
    row.v_n_prime = mean_stderr(s.v_n_prime);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace pacbayes
