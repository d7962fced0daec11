#include "digits/pipeline.hpp"

#include <algorithm>
#include <string>

#include "digits/error.hpp"

namespace digits {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::uint64_t group_key(const LabelSet& g) {
  std::uint64_t key = 0;
  for (Label l : g.members()) key |= std::uint64_t{1} << l;
  return key;
}

std::vector<LabeledFeatures> shadow_only(std::span<const FeatureSample> samples) {
  std::vector<LabeledFeatures> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back({{s.features.shadow.begin(), s.features.shadow.end()}, s.label});
  return out;
}

std::vector<FeatureSample> members_of(std::span<const FeatureSample> samples, const LabelSet& group) {
  std::vector<FeatureSample> out;
  for (const auto& s : samples)
    if (group.contains(s.label)) out.push_back(s);
  return out;
}

}  // namespace

PreparedSamples prepare_samples(std::span<const LabeledImage> data, ThresholdMode mode, bool invert) {
  PreparedSamples out;
  out.samples.reserve(data.size());
  for (const auto& item : data) {
    BinaryImage bin;
    if (const auto* gray = std::get_if<GrayImage>(&item.image)) {
      if (invert) {
        std::vector<std::uint8_t> px(gray->pixels().begin(), gray->pixels().end());
        for (auto& p : px) p = static_cast<std::uint8_t>(255 - p);
        bin = binarize(GrayImage(gray->width(), gray->height(), std::move(px)), mode);
      } else {
        bin = binarize(*gray, mode);
      }
    } else {
      bin = std::get<BinaryImage>(item.image);
    }
    try {
      out.samples.push_back({extract_features(normalize(bin)), item.label});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BlankImage) throw;
      ++out.blank;
    }
  }
  return out;
}

std::size_t PipelineConfig::hidden_for(const LabelSet& group) const {
  auto it = expert_hidden.find(group.to_string());
  return it == expert_hidden.end() ? expert_hidden_default : it->second;
}

void PipelineConfig::validate() const {
  if (coarse_hidden < 1) throw Error(ErrorCode::InvalidArgument, "coarse hidden size must be at least 1");
  if (expert_hidden_default < 1) throw Error(ErrorCode::InvalidArgument, "expert hidden size must be at least 1");
  for (const auto& [key, h] : expert_hidden) {
    if (h < 1) throw Error(ErrorCode::InvalidArgument, "expert hidden size for {" + key + "} must be at least 1");
  }
  if (tau < 1) throw Error(ErrorCode::InvalidArgument, "tau must be at least 1");
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "validation_fraction must lie strictly between 0 and 1");
  }
  coarse_train.validate();
  expert_train.validate();
  ga.validate();
}

void PipelineModel::validate() const {
  coarse.validate();
  if (coarse.topology.inputs != kShadowCount) {
    throw Error(ErrorCode::InvalidArgument, "coarse classifier must take the 24 shadow features");
  }
  if (experts.size() != groups.size()) throw Error(ErrorCode::InvalidArgument, "one expert per group required");
  for (std::size_t g = 0; g < experts.size(); ++g) {
    const auto& e = experts[g];
    e.model.validate();
    if (!(e.group == groups.groups()[g])) throw Error(ErrorCode::InvalidArgument, "expert group does not match table");
    if (e.model.topology.inputs != feature_width(e.chromosome)) {
      throw Error(ErrorCode::InvalidArgument, "expert input width does not match its chromosome");
    }
  }
}

TrainResult train_coarse(std::span<const FeatureSample> train, const PipelineConfig& cfg) {
  const auto data = shadow_only(train);
  return ::digits::train(init_model({kShadowCount, cfg.coarse_hidden, kNumClasses}, mix_seed(cfg.coarse_train.seed, 2)), data,
                         cfg.coarse_train);
}

GaResult run_group_ga(const LabelSet& group, std::span<const FeatureSample> train,
                      std::span<const FeatureSample> test, const PipelineConfig& cfg) {
  const std::uint64_t key = group_key(group);
  const auto group_train = members_of(train, group);
  std::vector<FeatureSample> fit, score;
  if (cfg.fitness_on_test) {
    fit = group_train;
    score = members_of(test, group);
  } else {
    std::vector<Label> labels;
    for (const auto& s : group_train) labels.push_back(s.label);
    if (labels.empty()) throw Error(ErrorCode::EmptyDataset, "no training samples for group {" + group.to_string() + "}");
    const auto parts = split_indices(labels, {1.0 - cfg.validation_fraction, mix_seed(cfg.ga.seed, key), true});
    for (std::size_t i : parts.train) fit.push_back(group_train[i]);
    for (std::size_t i : parts.test) score.push_back(group_train[i]);
  }
  GaConfig ga = cfg.ga;
  ga.seed = mix_seed(cfg.ga.seed, key);
  return run_ga(group, fit, score, ga);
}

PipelineBuild train_pipeline(std::span<const FeatureSample> train, const PipelineConfig& cfg,
                             std::span<const FeatureSample> test, const ProgressLog& log) {
  cfg.validate();
  if (train.empty()) throw Error(ErrorCode::EmptyDataset, "no training samples");
  LabelSet present;
  for (const auto& s : train) present.insert(s.label);
  if (present.size() < 2) throw Error(ErrorCode::InvalidArgument, "training data needs at least two classes");
  auto say = [&](const std::string& msg) {
    if (log) log(msg);
  };

  PipelineBuild build;
  say("training coarse classifier 24-" + std::to_string(cfg.coarse_hidden) + "-10 on " +
      std::to_string(train.size()) + " samples");
  auto coarse = train_coarse(train, cfg);
  build.model.coarse = std::move(coarse.model);
  build.coarse_loss = std::move(coarse.epoch_loss);
  build.train_confusion = confusion(build.model.coarse, shadow_only(train));
  build.model.groups = form_groups(build.train_confusion, cfg.tau);
  say("formed " + std::to_string(build.model.groups.size()) + " group(s) at tau=" + std::to_string(cfg.tau));

  for (const LabelSet& group : build.model.groups.groups()) {
    const std::uint64_t key = group_key(group);
    const auto group_train = members_of(train, group);
    say("running GA for group {" + group.to_string() + "} over " + std::to_string(group_train.size()) +
        " training samples");
    GaResult run = run_group_ga(group, train, test, cfg);
    say("group {" + group.to_string() + "}: best " + run.best.to_string() + " fitness " +
        std::to_string(run.best_fitness) + " after " + std::to_string(run.history.size()) + " generation(s)");

    std::vector<LabeledFeatures> expert_data;
    expert_data.reserve(group_train.size());
    for (const auto& s : group_train) expert_data.push_back({assemble_features(s.features, run.best), s.label});
    TrainConfig tc = cfg.expert_train;
    tc.seed = mix_seed(cfg.expert_train.seed, key);
    const Topology topo{feature_width(run.best), cfg.hidden_for(group), kNumClasses};
    auto expert = ::digits::train(init_model(topo, mix_seed(tc.seed, 2)), expert_data, tc);

    build.model.experts.push_back({group, run.best, std::move(expert.model), run.best_fitness});
    build.ga_runs.push_back(std::move(run));
  }
  build.model.validate();
  return build;
}

Classification classify(const PipelineModel& pm, const ImageFeatures& features) {
  Classification out;
  out.coarse_label = predict(pm.coarse, features.shadow);
  out.label = out.coarse_label;
  if (auto g = pm.groups.group_of(out.coarse_label)) {
    const GroupExpert& expert = pm.experts.at(*g);
    out.group = g;
    out.label = predict(expert.model, assemble_features(features, expert.chromosome), expert.group);
  }
  return out;
}

Classification classify(const PipelineModel& pm, const BinaryImage& img) {
  return classify(pm, extract_features(img));
}

double GroupReport::routed_accuracy() const { return ratio(routed_correct, routed); }
double GroupReport::routed_coarse_accuracy() const { return ratio(routed_coarse_correct, routed); }
double GroupReport::member_accuracy() const { return ratio(members_correct, members); }
double Report::coarse_accuracy() const { return ratio(coarse_correct, samples); }
double Report::combined_accuracy() const { return ratio(combined_correct, samples); }

Report evaluate(const PipelineModel& pm, std::span<const FeatureSample> test) {
  if (test.empty()) throw Error(ErrorCode::EmptyDataset, "no test samples");
  Report r;
  r.samples = test.size();
  for (const auto& e : pm.experts) {
    GroupReport g;
    g.group = e.group;
    g.chromosome = e.chromosome;
    g.topology = e.model.topology;
    r.groups.push_back(std::move(g));
  }

  for (const auto& s : test) {
    const Classification c = classify(pm, s.features);
    const bool coarse_ok = c.coarse_label == s.label;
    const bool final_ok = c.label == s.label;
    r.coarse_correct += coarse_ok;
    r.combined_correct += final_ok;
    r.coarse_confusion.add(s.label, c.coarse_label);
    r.combined_confusion.add(s.label, c.label);
    if (c.group) {
      GroupReport& g = r.groups[*c.group];
      ++g.routed;
      g.routed_correct += final_ok;
      g.routed_coarse_correct += coarse_ok;
      g.routed_confusion.add(s.label, c.label);
    } else {
      ++r.final_routed;
      r.final_correct += final_ok;
      r.final_confusion.add(s.label, c.label);
    }
  }

  // Expert accuracy over samples truly in each group, independent of routing.
  for (std::size_t g = 0; g < pm.experts.size(); ++g) {
    const GroupExpert& e = pm.experts[g];
    for (const auto& s : test) {
      if (!e.group.contains(s.label)) continue;
      ++r.groups[g].members;
      r.groups[g].members_correct += predict(e.model, assemble_features(s.features, e.chromosome), e.group) == s.label;
    }
  }
  return r;
}

}  // namespace digits
