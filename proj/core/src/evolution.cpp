#include "digits/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <thread>

#include "digits/error.hpp"
#include "digits/mlp.hpp"

namespace digits {

namespace {

constexpr std::size_t kCrossoverPoint = 4;

std::vector<std::size_t> distinct_slots(std::size_t size, std::size_t count, Rng& rng) {
  std::vector<std::size_t> slots(size);
  std::iota(slots.begin(), slots.end(), std::size_t{0});
  // Partial Fisher-Yates: the first `count` entries are a uniform ordered sample.
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(size - i));
    std::swap(slots[i], slots[j]);
  }
  slots.resize(count);
  return slots;
}

std::vector<LabeledFeatures> assemble_all(std::span<const FeatureSample> samples, const Chromosome& c) {
  std::vector<LabeledFeatures> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back({assemble_features(s.features, c), s.label});
  return out;
}

}  // namespace

void GaConfig::validate() const {
  auto fraction_ok = [](double f) { return f >= 0.0 && f <= 1.0; };
  if (population_size < 2) throw Error(ErrorCode::InvalidArgument, "population_size must be at least 2");
  if (max_generations < 1) throw Error(ErrorCode::InvalidArgument, "max_generations must be at least 1");
  if (!fraction_ok(crossover_fraction)) throw Error(ErrorCode::InvalidArgument, "crossover_fraction must lie in [0,1]");
  if (!fraction_ok(mutation_fraction)) throw Error(ErrorCode::InvalidArgument, "mutation_fraction must lie in [0,1]");
  if (!(stop_ratio > 0.0 && stop_ratio <= 1.0)) throw Error(ErrorCode::InvalidArgument, "stop_ratio must lie in (0,1]");
  if (fitness_epochs < 1) throw Error(ErrorCode::InvalidArgument, "fitness_epochs must be at least 1");
  if (hidden_units < 1) throw Error(ErrorCode::InvalidArgument, "hidden_units must be at least 1");
  if (threads < 1) throw Error(ErrorCode::InvalidArgument, "threads must be at least 1");
}

std::optional<double> FitnessCache::find(const Chromosome& c) const {
  std::lock_guard lock(mutex_);
  auto it = values_.find(c.key());
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

double FitnessCache::insert(const Chromosome& c, double fitness) {
  std::lock_guard lock(mutex_);
  return values_.try_emplace(c.key(), fitness).first->second;
}

std::size_t FitnessCache::size() const {
  std::lock_guard lock(mutex_);
  return values_.size();
}

double GenerationRecord::mean_fitness() const {
  if (fitness.empty()) return 0.0;
  return std::accumulate(fitness.begin(), fitness.end(), 0.0) / static_cast<double>(fitness.size());
}

Population random_population(Rng& rng, std::size_t size) {
  Population pop(size);
  for (auto& c : pop)
    for (std::size_t b = 0; b < kNumWindows; ++b) c.set(b, rng.coin());
  return pop;
}

Population roulette_select(const Population& pop, std::span<const double> fitness, Rng& rng) {
  if (fitness.size() != pop.size()) {
    throw Error(ErrorCode::DimensionMismatch, "fitness count does not match population size");
  }
  if (pop.empty()) return {};
  std::vector<double> cumulative(pop.size());
  double total = 0.0;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (!(fitness[i] >= 0.0)) throw Error(ErrorCode::InvalidArgument, "fitness must be non-negative");
    total += fitness[i];
    cumulative[i] = total;
  }

  Population out;
  out.reserve(pop.size());
  for (std::size_t k = 0; k < pop.size(); ++k) {
    if (total <= 0.0) {
      out.push_back(pop[static_cast<std::size_t>(rng.below(pop.size()))]);
      continue;
    }
    const double spin = rng.uniform01() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), spin);
    // Guard against spin landing on the final edge through rounding.
    std::size_t idx = std::min(static_cast<std::size_t>(it - cumulative.begin()), pop.size() - 1);
    while (fitness[idx] <= 0.0 && idx > 0) --idx;
    out.push_back(pop[idx]);
  }
  return out;
}

std::pair<Chromosome, Chromosome> midpoint_crossover(const Chromosome& a, const Chromosome& b) {
  Chromosome x = a;
  Chromosome y = b;
  for (std::size_t i = kCrossoverPoint; i < kNumWindows; ++i) {
    x.set(i, b.test(i));
    y.set(i, a.test(i));
  }
  return {x, y};
}

Population crossover(const Population& pop, Rng& rng, double fraction) {
  std::size_t count = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(pop.size()) + 1e-9));
  count = std::min(count - count % 2, pop.size() - pop.size() % 2);
  Population out = pop;
  const auto slots = distinct_slots(pop.size(), count, rng);
  for (std::size_t k = 0; k + 1 < slots.size(); k += 2) {
    auto [x, y] = midpoint_crossover(pop[slots[k]], pop[slots[k + 1]]);
    out[slots[k]] = x;
    out[slots[k + 1]] = y;
  }
  return out;
}

Population mutate(const Population& pop, Rng& rng, double fraction) {
  const std::size_t count =
      std::min(pop.size(), static_cast<std::size_t>(std::llround(fraction * static_cast<double>(pop.size()))));
  Population out = pop;
  for (std::size_t slot : distinct_slots(pop.size(), count, rng)) {
    out[slot].flip(static_cast<std::size_t>(rng.below(kNumWindows)));
  }
  return out;
}

bool should_stop(const GaHistory& history, const GaConfig& cfg) {
  if (history.empty()) return false;
  if (history.size() >= static_cast<std::size_t>(cfg.max_generations)) return true;
  const auto& last = history.back();
  return last.mean_fitness() >= cfg.stop_ratio * last.best_fitness;
}

GaResult evolve(const GaConfig& cfg, const FitnessFunction& fitness) {
  cfg.validate();
  Rng rng(cfg.seed);
  Population pop = random_population(rng, cfg.population_size);

  GaResult result;
  bool have_best = false;
  for (int generation = 0;; ++generation) {
    // Distinct bitstrings in first-appearance order.
    std::vector<Chromosome> unique;
    std::map<std::uint32_t, std::size_t> slot_of;
    for (const auto& c : pop) {
      if (slot_of.try_emplace(c.key(), unique.size()).second) unique.push_back(c);
    }
    std::vector<double> unique_fitness(unique.size());
    if (cfg.threads > 1 && unique.size() > 1) {
      std::atomic<std::size_t> next{0};
      std::vector<std::exception_ptr> errors(unique.size());
      {
        std::vector<std::jthread> workers;
        const unsigned n = std::min<unsigned>(cfg.threads, static_cast<unsigned>(unique.size()));
        for (unsigned t = 0; t < n; ++t) {
          workers.emplace_back([&] {
            for (std::size_t i = next++; i < unique.size(); i = next++) {
              try {
                unique_fitness[i] = fitness(unique[i]);
              } catch (...) {
                errors[i] = std::current_exception();
              }
            }
          });
        }
      }
      for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    } else {
      for (std::size_t i = 0; i < unique.size(); ++i) unique_fitness[i] = fitness(unique[i]);
    }

    GenerationRecord record;
    record.generation = generation;
    record.members = pop;
    record.fitness.reserve(pop.size());
    for (const auto& c : pop) {
      const double f = unique_fitness[slot_of.at(c.key())];
      if (!(f >= 0.0 && f <= 1.0)) throw Error(ErrorCode::InvalidArgument, "fitness outside [0,1]");
      record.fitness.push_back(f);
      if (!have_best || f > result.best_fitness) {
        have_best = true;
        result.best_fitness = f;
        result.best = c;
      }
    }
    record.best_fitness = result.best_fitness;
    record.best = result.best;
    result.history.push_back(std::move(record));

    if (should_stop(result.history, cfg)) break;

    pop = roulette_select(pop, result.history.back().fitness, rng);
    pop = crossover(pop, rng, cfg.crossover_fraction);
    pop = mutate(pop, rng, cfg.mutation_fraction);
  }
  return result;
}

WindowFitness::WindowFitness(LabelSet group, std::span<const FeatureSample> train,
                             std::span<const FeatureSample> eval, GaConfig cfg)
    : group_(group), train_(train), eval_(eval), cfg_(cfg) {
  cfg_.validate();
  if (train_.empty() || eval_.empty()) throw Error(ErrorCode::EmptyDataset, "fitness needs train and eval samples");
  for (auto part : {train_, eval_}) {
    for (const auto& s : part) {
      if (!group_.contains(s.label)) {
        throw Error(ErrorCode::LabelOutsideGroup,
                    "label " + std::to_string(s.label) + " not in group {" + group_.to_string() + "}");
      }
    }
  }
}

std::uint64_t WindowFitness::model_seed(std::uint64_t ga_seed, const Chromosome& c) {
  return mix_seed(ga_seed, c.key());
}

double WindowFitness::operator()(const Chromosome& c) {
  if (auto hit = cache_.find(c)) return *hit;

  const auto train_set = assemble_all(train_, c);
  const auto eval_set = assemble_all(eval_, c);
  const std::uint64_t seed = model_seed(cfg_.seed, c);
  MlpModel model = init_model({feature_width(c), cfg_.hidden_units, kNumClasses}, seed);
  TrainConfig tc;
  tc.learning_rate = cfg_.learning_rate;
  tc.momentum = cfg_.momentum;
  tc.epochs = cfg_.fitness_epochs;
  tc.seed = mix_seed(seed, 1);
  auto trained = train(std::move(model), train_set, tc);
  ++trainings_;
  return cache_.insert(c, accuracy(trained.model, eval_set, group_));
}

GaResult run_ga(const LabelSet& group, std::span<const FeatureSample> train,
                std::span<const FeatureSample> eval, const GaConfig& cfg) {
  WindowFitness fitness(group, train, eval, cfg);
  return evolve(cfg, [&fitness](const Chromosome& c) { return fitness(c); });
}

}  // namespace digits
