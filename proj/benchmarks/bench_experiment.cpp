#include <benchmark/benchmark.h>

#include "pacbayes/datasets.hpp"
#include "pacbayes/experiment.hpp"
#include "pacbayes/learners.hpp"
#include "pacbayes/posteriors.hpp"

namespace {

pacbayes::Dataset make_data(std::size_t n, std::size_t d) {
  pacbayes::SyntheticSpec spec;
  spec.n = n;
  spec.d = d;
  spec.seed = 3;
  return pacbayes::gen_synthetic(spec);
}

void BM_TrainLogistic(benchmark::State& state) {
  const auto data = make_data(static_cast<std::size_t>(state.range(0)), 10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        pacbayes::train_logistic(data.features, data.labels, pacbayes::TrainOptions{}));
  }
}
BENCHMARK(BM_TrainLogistic)->Arg(800)->Arg(8000)->Unit(benchmark::kMillisecond);

void BM_SamplerEvaluate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto data = make_data(n, 10);
  const auto h = pacbayes::train_logistic(data.features, data.labels, pacbayes::TrainOptions{});
  const Eigen::VectorXd ref = pacbayes::cross_fitted_losses(h, h, data.features, data.labels, n / 2);
  const pacbayes::PosteriorSampler sampler(data.features, data.labels, pacbayes::McConfig{1000, 4});
  const pacbayes::IsotropicGaussian post{h.weights, 0.01};
  for (auto _ : state) {
    benchmark::DoNotOptimize(sampler.evaluate(post, n / 2, ref));
  }
}
BENCHMARK(BM_SamplerEvaluate)->Arg(800)->Arg(8000)->Unit(benchmark::kMillisecond);

void BM_RunExperiment(benchmark::State& state) {
  const auto train = make_data(static_cast<std::size_t>(state.range(0)), 10);
  const auto test = make_data(2000, 10);
  pacbayes::ExperimentConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pacbayes::run_experiment(train, pacbayes::DatasetTestSet(test), config));
  }
}
BENCHMARK(BM_RunExperiment)->Arg(800)->Arg(8000)->Unit(benchmark::kMillisecond);

}  // namespace
