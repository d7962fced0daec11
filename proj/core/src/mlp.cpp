#include "digits/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "digits/error.hpp"
#include "digits/random.hpp"

namespace digits {

namespace {

void require_width(const MlpModel& model, std::size_t width) {
  if (width != model.topology.inputs) {
    throw Error(ErrorCode::DimensionMismatch,
                "feature vector has " + std::to_string(width) + " values, model expects " +
                    std::to_string(model.topology.inputs));
  }
}

void require_nonempty(std::span<const LabeledFeatures> data) {
  if (data.empty()) throw Error(ErrorCode::EmptyDataset, "no samples");
}

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Hidden activations and output probabilities for one sample.
struct Activations {
  std::vector<double> hidden;
  std::vector<double> scores;
};

void activate(const MlpModel& m, std::span<const double> x, Activations& a) {
  const std::size_t ni = m.topology.inputs;
  const std::size_t nh = m.topology.hidden;
  const std::size_t no = m.topology.outputs;
  a.hidden.resize(nh);
  a.scores.resize(no);
  for (std::size_t h = 0; h < nh; ++h) {
    const double* w = m.hidden_weights.data() + h * ni;
    double z = m.hidden_biases[h];
    for (std::size_t i = 0; i < ni; ++i) z += w[i] * x[i];
    a.hidden[h] = logistic(z);
  }
  double max_logit = -INFINITY;
  for (std::size_t o = 0; o < no; ++o) {
    const double* w = m.output_weights.data() + o * nh;
    double z = m.output_biases[o];
    for (std::size_t h = 0; h < nh; ++h) z += w[h] * a.hidden[h];
    a.scores[o] = z;
    max_logit = std::max(max_logit, z);
  }
  double total = 0.0;
  for (double& s : a.scores) {
    s = std::exp(s - max_logit);
    total += s;
  }
  for (double& s : a.scores) s /= total;
}

void require_label(const MlpModel& m, Label label) {
  if (label < 0 || static_cast<std::size_t>(label) >= m.topology.outputs) {
    throw Error(ErrorCode::InvalidArgument, "label " + std::to_string(label) + " outside model outputs");
  }
}

// Accumulates the gradient of one sample into `g` (same shapes as the model).
void backprop(const MlpModel& m, std::span<const double> x, Label label, const Activations& a,
              std::vector<double>& delta_out, std::vector<double>& delta_hidden, MlpModel& g) {
  const std::size_t ni = m.topology.inputs;
  const std::size_t nh = m.topology.hidden;
  const std::size_t no = m.topology.outputs;
  delta_out.assign(a.scores.begin(), a.scores.end());
  delta_out[static_cast<std::size_t>(label)] -= 1.0;
  delta_hidden.assign(nh, 0.0);
  for (std::size_t o = 0; o < no; ++o) {
    const double d = delta_out[o];
    const double* w = m.output_weights.data() + o * nh;
    double* gw = g.output_weights.data() + o * nh;
    for (std::size_t h = 0; h < nh; ++h) {
      gw[h] = d * a.hidden[h];
      delta_hidden[h] += d * w[h];
    }
    g.output_biases[o] = d;
  }
  for (std::size_t h = 0; h < nh; ++h) {
    const double d = delta_hidden[h] * a.hidden[h] * (1.0 - a.hidden[h]);
    double* gw = g.hidden_weights.data() + h * ni;
    for (std::size_t i = 0; i < ni; ++i) gw[i] = d * x[i];
    g.hidden_biases[h] = d;
  }
}

}  // namespace

MlpModel MlpModel::zeros(const Topology& t) {
  if (t.inputs < 1 || t.hidden < 1 || t.outputs < 1) {
    throw Error(ErrorCode::InvalidArgument, "topology counts must be at least 1");
  }
  MlpModel m;
  m.topology = t;
  m.hidden_weights.assign(t.hidden * t.inputs, 0.0);
  m.hidden_biases.assign(t.hidden, 0.0);
  m.output_weights.assign(t.outputs * t.hidden, 0.0);
  m.output_biases.assign(t.outputs, 0.0);
  return m;
}

void MlpModel::validate() const {
  const Topology& t = topology;
  if (t.inputs < 1 || t.hidden < 1 || t.outputs < 1) {
    throw Error(ErrorCode::InvalidArgument, "topology counts must be at least 1");
  }
  if (hidden_weights.size() != t.hidden * t.inputs || hidden_biases.size() != t.hidden ||
      output_weights.size() != t.outputs * t.hidden || output_biases.size() != t.outputs) {
    throw Error(ErrorCode::InvalidArgument, "weight shapes do not match topology");
  }
  for (const auto* v : {&hidden_weights, &hidden_biases, &output_weights, &output_biases}) {
    if (!std::all_of(v->begin(), v->end(), [](double w) { return std::isfinite(w); })) {
      throw Error(ErrorCode::InvalidArgument, "non-finite model parameter");
    }
  }
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw Error(ErrorCode::InvalidArgument, "learning_rate must be positive");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw Error(ErrorCode::InvalidArgument, "momentum must lie in [0,1)");
  if (epochs < 1) throw Error(ErrorCode::InvalidArgument, "epochs must be at least 1");
}

MlpModel init_model(const Topology& topology, std::uint64_t seed) {
  MlpModel m = MlpModel::zeros(topology);
  Rng rng(seed);
  const double r1 = std::sqrt(6.0 / static_cast<double>(topology.inputs + topology.hidden));
  const double r2 = std::sqrt(6.0 / static_cast<double>(topology.hidden + topology.outputs));
  for (double& w : m.hidden_weights) w = rng.uniform(-r1, r1);
  for (double& w : m.output_weights) w = rng.uniform(-r2, r2);
  return m;
}

std::vector<double> forward(const MlpModel& model, std::span<const double> x) {
  require_width(model, x.size());
  Activations a;
  activate(model, x, a);
  return a.scores;
}

double sample_loss(const MlpModel& model, std::span<const double> x, Label label) {
  require_label(model, label);
  const auto scores = forward(model, x);
  return -std::log(std::max(scores[static_cast<std::size_t>(label)], 1e-300));
}

MlpModel gradient(const MlpModel& model, std::span<const double> x, Label label) {
  require_width(model, x.size());
  require_label(model, label);
  Activations a;
  activate(model, x, a);
  MlpModel g = MlpModel::zeros(model.topology);
  std::vector<double> d_out, d_hidden;
  backprop(model, x, label, a, d_out, d_hidden, g);
  return g;
}

TrainResult train(MlpModel model, std::span<const LabeledFeatures> data, const TrainConfig& cfg) {
  cfg.validate();
  require_nonempty(data);
  for (const auto& s : data) {
    require_width(model, s.features.size());
    require_label(model, s.label);
  }

  Rng rng(cfg.seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  MlpModel grad = MlpModel::zeros(model.topology);
  MlpModel velocity = MlpModel::zeros(model.topology);
  Activations a;
  std::vector<double> d_out, d_hidden;

  auto step = [&](std::vector<double>& w, std::vector<double>& v, const std::vector<double>& g) {
    for (std::size_t k = 0; k < w.size(); ++k) {
      v[k] = cfg.momentum * v[k] - cfg.learning_rate * g[k];
      w[k] += v[k];
    }
  };

  TrainResult result;
  result.epoch_loss.reserve(static_cast<std::size_t>(cfg.epochs));
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.shuffle) rng.shuffle(std::span<std::size_t>(order));
    double loss_sum = 0.0;
    for (std::size_t idx : order) {
      const LabeledFeatures& s = data[idx];
      activate(model, s.features, a);
      loss_sum += -std::log(std::max(a.scores[static_cast<std::size_t>(s.label)], 1e-300));
      backprop(model, s.features, s.label, a, d_out, d_hidden, grad);
      step(model.hidden_weights, velocity.hidden_weights, grad.hidden_weights);
      step(model.hidden_biases, velocity.hidden_biases, grad.hidden_biases);
      step(model.output_weights, velocity.output_weights, grad.output_weights);
      step(model.output_biases, velocity.output_biases, grad.output_biases);
    }
    result.epoch_loss.push_back(loss_sum / static_cast<double>(data.size()));
  }
  result.model = std::move(model);
  return result;
}

Label predict(const MlpModel& model, std::span<const double> x, const LabelSet& allowed) {
  if (allowed.empty()) throw Error(ErrorCode::EmptyAllowedSet, "prediction needs at least one allowed label");
  const auto scores = forward(model, x);
  Label best = -1;
  double best_score = -INFINITY;
  for (Label l : allowed.members()) {
    if (static_cast<std::size_t>(l) >= scores.size()) continue;
    if (scores[static_cast<std::size_t>(l)] > best_score) {
      best_score = scores[static_cast<std::size_t>(l)];
      best = l;
    }
  }
  if (best < 0) throw Error(ErrorCode::EmptyAllowedSet, "no allowed label is a model output");
  return best;
}

Label predict(const MlpModel& model, std::span<const double> x) {
  return predict(model, x, LabelSet::all());
}

ConfusionMatrix confusion(const MlpModel& model, std::span<const LabeledFeatures> data) {
  require_nonempty(data);
  ConfusionMatrix cm;
  for (const auto& s : data) cm.add(s.label, predict(model, s.features));
  return cm;
}

double accuracy(const MlpModel& model, std::span<const LabeledFeatures> data) {
  return accuracy(model, data, LabelSet::all());
}

double accuracy(const MlpModel& model, std::span<const LabeledFeatures> data, const LabelSet& allowed) {
  require_nonempty(data);
  std::size_t correct = 0;
  for (const auto& s : data) correct += predict(model, s.features, allowed) == s.label ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace digits
