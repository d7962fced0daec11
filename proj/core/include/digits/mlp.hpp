#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "digits/labels.hpp"

namespace digits {

struct Topology {
  std::size_t inputs = 24;
  std::size_t hidden = 35;
  std::size_t outputs = kNumClasses;

  friend bool operator==(const Topology&, const Topology&) = default;
};

/// Single hidden layer, logistic hidden units, softmax output.
/// Weight matrices are row-major: hidden_weights[h * inputs + i].
struct MlpModel {
  Topology topology;
  std::vector<double> hidden_weights;
  std::vector<double> hidden_biases;
  std::vector<double> output_weights;
  std::vector<double> output_biases;

  /// All-zero parameters of the given shape.
  static MlpModel zeros(const Topology& topology);

  /// Throws Error(InvalidArgument) if shapes disagree with the topology or
  /// any parameter is non-finite.
  void validate() const;

  friend bool operator==(const MlpModel&, const MlpModel&) = default;
};

struct TrainConfig {
  double learning_rate = 0.01;
  double momentum = 0.9;
  int epochs = 100;
  std::uint64_t seed = 1;
  bool shuffle = true;

  void validate() const;
};

struct LabeledFeatures {
  std::vector<double> features;
  Label label = 0;
};

/// Glorot-uniform weights, zero biases; bit-identical for equal inputs.
MlpModel init_model(const Topology& topology, std::uint64_t seed);

/// Class scores (softmax probabilities), one per output.
std::vector<double> forward(const MlpModel& model, std::span<const double> x);

/// Cross-entropy of one sample against a one-hot target.
double sample_loss(const MlpModel& model, std::span<const double> x, Label label);

/// Loss gradient for one sample, laid out like the model parameters.
MlpModel gradient(const MlpModel& model, std::span<const double> x, Label label);

struct TrainResult {
  MlpModel model;
  /// Mean per-sample loss of each epoch, measured before each update.
  std::vector<double> epoch_loss;
};

/// Per-sample SGD with momentum on cross-entropy.
TrainResult train(MlpModel model, std::span<const LabeledFeatures> data, const TrainConfig& cfg);

/// Argmax over `allowed`; ties go to the smallest label.
Label predict(const MlpModel& model, std::span<const double> x, const LabelSet& allowed);
Label predict(const MlpModel& model, std::span<const double> x);

ConfusionMatrix confusion(const MlpModel& model, std::span<const LabeledFeatures> data);
double accuracy(const MlpModel& model, std::span<const LabeledFeatures> data);
/// Accuracy when every prediction is restricted to `allowed`.
double accuracy(const MlpModel& model, std::span<const LabeledFeatures> data, const LabelSet& allowed);

}  // namespace digits
