#include <benchmark/benchmark.h>

#include "digits/datasets.hpp"
#include "digits/evolution.hpp"
#include "digits/features.hpp"
#include "digits/mlp.hpp"
#include "digits/pipeline.hpp"

namespace {

using namespace digits;

std::vector<BinaryImage> sample_images(std::size_t n) {
  const auto data = synth_digits((n + 9) / 10, 1, 0.08);
  std::vector<BinaryImage> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(normalize(binarize(std::get<GrayImage>(data[i].image))));
  return out;
}

void BM_ShadowFeatures(benchmark::State& state) {
  const auto images = sample_images(64);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(shadow_features(images[i++ % images.size()]));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ShadowFeatures);

void BM_LongestRunAllWindows(benchmark::State& state) {
  const auto images = sample_images(64);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& img = images[i++ % images.size()];
    for (const auto& w : window_table()) benchmark::DoNotOptimize(longest_run_window(img, w));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_LongestRunAllWindows);

void BM_PrepareSample(benchmark::State& state) {
  const auto data = synth_digits(10, 2, 0.08);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& g = std::get<GrayImage>(data[i++ % data.size()].image);
    benchmark::DoNotOptimize(extract_features(normalize(binarize(g))));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PrepareSample);

void BM_Forward(benchmark::State& state) {
  const auto inputs = static_cast<std::size_t>(state.range(0));
  const auto m = init_model({inputs, static_cast<std::size_t>(state.range(1)), kNumClasses}, 1);
  const std::vector<double> x(inputs, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(forward(m, x));
}
BENCHMARK(BM_Forward)->Args({24, 35})->Args({36, 20})->Args({60, 30});

void BM_TrainEpoch(benchmark::State& state) {
  const auto images = sample_images(400);
  std::vector<LabeledFeatures> data;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const auto s = shadow_features(images[i]);
    data.push_back({{s.begin(), s.end()}, static_cast<Label>(i % kNumClasses)});
  }
  TrainConfig cfg;
  cfg.epochs = 1;
  const auto m = init_model({24, 35, 10}, 1);
  for (auto _ : state) benchmark::DoNotOptimize(train(m, data, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data.size()));
}
BENCHMARK(BM_TrainEpoch)->Unit(benchmark::kMillisecond);

void BM_GaGenerationOperators(benchmark::State& state) {
  Rng rng(3);
  auto pop = random_population(rng);
  std::vector<double> fit(pop.size());
  for (auto _ : state) {
    for (std::size_t k = 0; k < pop.size(); ++k) fit[k] = static_cast<double>(pop[k].popcount()) / 9.0;
    pop = mutate(crossover(roulette_select(pop, fit, rng), rng), rng);
    benchmark::DoNotOptimize(pop);
  }
}
BENCHMARK(BM_GaGenerationOperators);

void BM_WindowFitness(benchmark::State& state) {
  const auto images = sample_images(200);
  std::vector<FeatureSample> group;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const Label y = static_cast<Label>(i % kNumClasses);
    if (y == 1 || y == 9) group.push_back({extract_features(images[i]), y});
  }
  GaConfig cfg;
  std::uint32_t key = 0;
  for (auto _ : state) {
    // Fresh evaluator per iteration so the cache never hits.
    WindowFitness fit(LabelSet{1, 9}, group, group, cfg);
    benchmark::DoNotOptimize(fit(Chromosome::from_key(key++ % 512)));
  }
}
BENCHMARK(BM_WindowFitness)->Unit(benchmark::kMillisecond);

}  // namespace

// The packaged benchmark_main archive carries LTO bytecode from another
// compiler release, so the entry point is defined here.
BENCHMARK_MAIN();
