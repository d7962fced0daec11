#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "digits/chromosome.hpp"
#include "digits/features.hpp"
#include "digits/labels.hpp"
#include "digits/random.hpp"

namespace digits {

struct GaConfig {
  std::size_t population_size = 20;
  int max_generations = 20;
  double crossover_fraction = 0.8;
  double mutation_fraction = 0.5;
  double stop_ratio = 0.98;
  std::uint64_t seed = 1;

  // Fitness classifier.
  int fitness_epochs = 30;
  std::size_t hidden_units = 20;
  double learning_rate = 0.01;
  double momentum = 0.9;

  /// Worker threads for fitness evaluation within one generation.
  unsigned threads = 1;

  void validate() const;
};

using Population = std::vector<Chromosome>;

/// Bitstring -> fitness. The first stored value for a key wins.
class FitnessCache {
 public:
  std::optional<double> find(const Chromosome& c) const;
  /// Returns the value now associated with the key.
  double insert(const Chromosome& c, double fitness);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::unordered_map<std::uint32_t, double> values_;
};

struct GenerationRecord {
  int generation = 0;
  Population members;
  std::vector<double> fitness;
  double best_fitness = 0.0;
  Chromosome best;

  double mean_fitness() const;
};

using GaHistory = std::vector<GenerationRecord>;

struct GaResult {
  Chromosome best;
  double best_fitness = 0.0;
  GaHistory history;
};

Population random_population(Rng& rng, std::size_t size = 20);

/// Fitness-proportional draws with replacement; uniform when all fitness is zero.
Population roulette_select(const Population& pop, std::span<const double> fitness, Rng& rng);

/// Keeps bits 0..3 and swaps bits 4..8.
std::pair<Chromosome, Chromosome> midpoint_crossover(const Chromosome& a, const Chromosome& b);

/// Crosses round-down-to-even(fraction * size) distinct members, paired at random.
Population crossover(const Population& pop, Rng& rng, double fraction = 0.8);

/// Flips one random bit in round(fraction * size) distinct members.
Population mutate(const Population& pop, Rng& rng, double fraction = 0.5);

bool should_stop(const GaHistory& history, const GaConfig& cfg);

using FitnessFunction = std::function<double(const Chromosome&)>;

/// The generational loop: evaluate, track best, test the stopping rule,
/// then roulette -> crossover -> mutation. `fitness` must be thread-safe
/// when cfg.threads > 1.
GaResult evolve(const GaConfig& cfg, const FitnessFunction& fitness);

struct FeatureSample {
  ImageFeatures features;
  Label label = 0;
};

/// Recognition rate of an MLP trained on shadow + chromosome-selected
/// window features, scored with predictions restricted to the group.
class WindowFitness {
 public:
  /// Throws Error(EmptyDataset) or Error(LabelOutsideGroup).
  WindowFitness(LabelSet group, std::span<const FeatureSample> train, std::span<const FeatureSample> eval,
                GaConfig cfg);

  double operator()(const Chromosome& c);

  /// Number of classifiers actually trained (cache misses).
  std::size_t trainings() const { return trainings_.load(); }
  const FitnessCache& cache() const { return cache_; }

  /// Seed used for the classifier of chromosome `c`.
  static std::uint64_t model_seed(std::uint64_t ga_seed, const Chromosome& c);

 private:
  LabelSet group_;
  std::span<const FeatureSample> train_;
  std::span<const FeatureSample> eval_;
  GaConfig cfg_;
  FitnessCache cache_;
  std::atomic<std::size_t> trainings_{0};
};

GaResult run_ga(const LabelSet& group, std::span<const FeatureSample> train,
                std::span<const FeatureSample> eval, const GaConfig& cfg);

}  // namespace digits
