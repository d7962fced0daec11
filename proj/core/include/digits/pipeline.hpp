#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "digits/datasets.hpp"
#include "digits/evolution.hpp"
#include "digits/features.hpp"
#include "digits/grouping.hpp"
#include "digits/mlp.hpp"

namespace digits {

struct PreparedSamples {
  std::vector<FeatureSample> samples;
  /// Inputs dropped because they binarized to nothing.
  std::size_t blank = 0;
};

/// Binarize (grayscale only; `invert` treats bright pixels as ink),
/// normalize to 32x32 and extract every feature. Blank samples are
/// counted and skipped.
PreparedSamples prepare_samples(std::span<const LabeledImage> data, ThresholdMode mode = OtsuThreshold{},
                                bool invert = false);

struct PipelineConfig {
  std::size_t coarse_hidden = 35;
  TrainConfig coarse_train;
  std::int64_t tau = 5;
  GaConfig ga;
  /// Expert hidden size keyed by LabelSet::to_string(), e.g. "1,9".
  std::map<std::string, std::size_t> expert_hidden{{"1,9", 20}, {"0,3,4,5,6", 40}};
  std::size_t expert_hidden_default = 30;
  TrainConfig expert_train;
  /// Share of each group's training samples held out to score GA fitness.
  double validation_fraction = 0.2;
  /// Score fitness on the test split instead of a validation split.
  bool fitness_on_test = false;

  std::size_t hidden_for(const LabelSet& group) const;
  void validate() const;
};

struct GroupExpert {
  LabelSet group;
  Chromosome chromosome;
  MlpModel model;
  double fitness = 0.0;
};

struct PipelineModel {
  MlpModel coarse;
  GroupTable groups;
  std::vector<GroupExpert> experts;

  /// Throws Error(InvalidArgument) when an invariant is broken.
  void validate() const;
};

/// Everything a training run produces besides the model itself.
struct PipelineBuild {
  PipelineModel model;
  std::vector<double> coarse_loss;
  ConfusionMatrix train_confusion;
  std::vector<GaResult> ga_runs;
};

using ProgressLog = std::function<void(std::string_view)>;

/// Coarse 24-h-10 classifier on shadow features only.
TrainResult train_coarse(std::span<const FeatureSample> train, const PipelineConfig& cfg);

/// Window search for one group: fit on the group's training members and
/// score on a held-out share of them (or on the group's test members when
/// fitness_on_test). The GA seed is derived from cfg.ga.seed and the group.
GaResult run_group_ga(const LabelSet& group, std::span<const FeatureSample> train,
                      std::span<const FeatureSample> test, const PipelineConfig& cfg);

/// Coarse training, grouping from the training confusion matrix, then a
/// GA and an expert per group. `test` is only read when fitness_on_test.
PipelineBuild train_pipeline(std::span<const FeatureSample> train, const PipelineConfig& cfg,
                             std::span<const FeatureSample> test = {}, const ProgressLog& log = {});

struct Classification {
  Label label = 0;
  Label coarse_label = 0;
  /// Index into the group table when the sample was refined.
  std::optional<std::size_t> group;
};

Classification classify(const PipelineModel& pm, const ImageFeatures& features);
Classification classify(const PipelineModel& pm, const BinaryImage& img);

struct GroupReport {
  LabelSet group;
  Chromosome chromosome;
  Topology topology;
  std::size_t routed = 0;
  std::size_t routed_correct = 0;
  /// Coarse top choice correct, over the same routed samples.
  std::size_t routed_coarse_correct = 0;
  std::size_t members = 0;
  std::size_t members_correct = 0;
  ConfusionMatrix routed_confusion;

  double routed_accuracy() const;
  double routed_coarse_accuracy() const;
  double member_accuracy() const;
};

struct Report {
  std::size_t samples = 0;
  std::size_t coarse_correct = 0;
  std::size_t combined_correct = 0;
  std::size_t final_routed = 0;
  std::size_t final_correct = 0;
  std::vector<GroupReport> groups;
  ConfusionMatrix coarse_confusion;
  ConfusionMatrix combined_confusion;
  ConfusionMatrix final_confusion;

  double coarse_accuracy() const;
  double combined_accuracy() const;
  double improvement() const { return combined_accuracy() - coarse_accuracy(); }
  double rejection_rate() const { return 0.0; }
};

Report evaluate(const PipelineModel& pm, std::span<const FeatureSample> test);

}  // namespace digits
