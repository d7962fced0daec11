#include <gtest/gtest.h>

#include <cmath>

#include "digits/error.hpp"
#include "digits/mlp.hpp"
#include "digits/random.hpp"
#include "oracles.hpp"

namespace digits {
namespace {

std::vector<double> random_vector(Rng& rng, std::size_t n, double lo = 0.0, double hi = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

MlpModel random_model(Rng& rng, Topology t) {
  auto m = init_model(t, rng.next());
  for (auto& b : m.hidden_biases) b = rng.uniform(-0.5, 0.5);
  for (auto& b : m.output_biases) b = rng.uniform(-0.5, 0.5);
  return m;
}

double max_relative_error(const MlpModel& a, const MlpModel& b) {
  double worst = 0.0;
  auto scan = [&](const std::vector<double>& x, const std::vector<double>& y) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double denom = std::max({std::abs(x[i]), std::abs(y[i]), 1e-7});
      worst = std::max(worst, std::abs(x[i] - y[i]) / denom);
    }
  };
  scan(a.hidden_weights, b.hidden_weights);
  scan(a.hidden_biases, b.hidden_biases);
  scan(a.output_weights, b.output_weights);
  scan(a.output_biases, b.output_biases);
  return worst;
}

TEST(Init, DeterministicAndBounded) {
  const Topology t{24, 35, 10};
  EXPECT_EQ(init_model(t, 7), init_model(t, 7));
  EXPECT_NE(init_model(t, 7), init_model(t, 8));
  const auto m = init_model(t, 7);
  for (double b : m.hidden_biases) EXPECT_EQ(b, 0.0);
  for (double b : m.output_biases) EXPECT_EQ(b, 0.0);
  const double out_bound = std::sqrt(6.0 / 45.0);
  for (double w : m.output_weights) EXPECT_LE(std::abs(w), out_bound);

  const auto small = init_model({2, 2, 2}, 1);
  for (double w : small.hidden_weights) EXPECT_LE(std::abs(w), 1.2247449);
}

TEST(Forward, ZeroModelIsUniform) {
  const auto m = MlpModel::zeros({3, 4, 10});
  const std::vector<double> x{0.2, 0.5, 0.9};
  for (double s : forward(m, x)) EXPECT_DOUBLE_EQ(s, 0.1);
}

TEST(Forward, HandComputedOneOneTwo) {
  auto m = MlpModel::zeros({1, 1, 2});
  m.hidden_weights = {0.7};
  m.hidden_biases = {-0.2};
  m.output_weights = {1.5, -0.4};
  m.output_biases = {0.1, 0.3};
  const double x = 0.6;
  const double h = 1.0 / (1.0 + std::exp(-(0.7 * x - 0.2)));
  const double z0 = 1.5 * h + 0.1, z1 = -0.4 * h + 0.3;
  const double p0 = std::exp(z0) / (std::exp(z0) + std::exp(z1));
  const auto s = forward(m, std::vector<double>{x});
  EXPECT_NEAR(s[0], p0, 1e-12);
  EXPECT_NEAR(s[1], 1.0 - p0, 1e-12);
  EXPECT_NEAR(sample_loss(m, std::vector<double>{x}, 1), -std::log(1.0 - p0), 1e-12);
}

TEST(Forward, LargeLogitsStayFinite) {
  auto m = MlpModel::zeros({1, 1, 2});
  m.output_biases = {900.0, -900.0};
  const auto s = forward(m, std::vector<double>{0.0});
  EXPECT_EQ(s[0], 1.0);
  EXPECT_TRUE(std::isfinite(sample_loss(m, std::vector<double>{0.0}, 1)));
}

TEST(Forward, WrongWidthThrows) {
  const auto m = MlpModel::zeros({3, 4, 10});
  try {
    forward(m, std::vector<double>{1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(ForwardProperty, ScoresSumToOne) {
  Rng rng(101);
  const auto m = random_model(rng, {24, 35, 10});
  for (int i = 0; i < 1000; ++i) {
    const auto s = forward(m, random_vector(rng, 24));
    double sum = 0.0;
    for (double v : s) {
      ASSERT_GT(v, 0.0);
      sum += v;
    }
    ASSERT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(Gradient, MatchesFiniteDifferencesThreeFourTen) {
  Rng rng(103);
  const auto m = random_model(rng, {3, 4, 10});
  const auto x = random_vector(rng, 3);
  const auto analytic = gradient(m, x, 7);
  const auto numeric = testing::finite_difference_gradient(m, x, 7, 1e-4);
  EXPECT_LT(max_relative_error(analytic, numeric), 1e-4);
}

TEST(GradientProperty, RandomPairs) {
  Rng rng(107);
  for (int trial = 0; trial < 100; ++trial) {
    const Topology t{1 + rng.below(8), 1 + rng.below(8), kNumClasses};
    const auto m = random_model(rng, t);
    const auto x = random_vector(rng, t.inputs);
    const Label y = static_cast<Label>(rng.below(kNumClasses));
    const auto err = max_relative_error(gradient(m, x, y), testing::finite_difference_gradient(m, x, y, 1e-4));
    ASSERT_LT(err, 1e-4) << "trial " << trial;
  }
}

TEST(Train, OneEpochReducesSingleSampleLoss) {
  Rng rng(109);
  const auto m = init_model({5, 6, 10}, 3);
  const LabeledFeatures s{random_vector(rng, 5), 4};
  TrainConfig cfg;
  cfg.learning_rate = 0.1;
  cfg.epochs = 1;
  const auto r = train(m, std::span(&s, 1), cfg);
  EXPECT_LT(sample_loss(r.model, s.features, 4), sample_loss(m, s.features, 4));
  ASSERT_EQ(r.epoch_loss.size(), 1u);
  EXPECT_DOUBLE_EQ(r.epoch_loss[0], sample_loss(m, s.features, 4));
}

TEST(Train, RejectsBadInputs) {
  const auto m = MlpModel::zeros({2, 2, 10});
  TrainConfig cfg;
  cfg.epochs = 0;
  const LabeledFeatures s{{0.1, 0.2}, 1};
  EXPECT_THROW(train(m, std::span(&s, 1), cfg), Error);
  try {
    train(m, {}, TrainConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyDataset);
  }
  const LabeledFeatures wide{{0.1, 0.2, 0.3}, 1};
  try {
    train(m, std::span(&wide, 1), TrainConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

std::vector<LabeledFeatures> blobs(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  std::vector<LabeledFeatures> data;
  for (std::size_t i = 0; i < n; ++i) {
    const Label y = static_cast<Label>(i % 2);
    const double cx = y == 0 ? 0.25 : 0.75;
    data.push_back({{cx + rng.uniform(-0.1, 0.1), cx + rng.uniform(-0.1, 0.1)}, y});
  }
  return data;
}

TEST(Train, SeparableBlobsReachFullAccuracy) {
  const auto data = blobs(113, 100);
  TrainConfig cfg;
  cfg.learning_rate = 0.5;
  cfg.epochs = 200;
  const auto r = train(init_model({2, 8, 10}, 5), data, cfg);
  EXPECT_EQ(accuracy(r.model, data), 1.0);
  EXPECT_LT(r.epoch_loss.back(), r.epoch_loss.front());
}

TEST(Train, Deterministic) {
  const auto data = blobs(127, 40);
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.seed = 9;
  const auto a = train(init_model({2, 4, 10}, 1), data, cfg);
  const auto b = train(init_model({2, 4, 10}, 1), data, cfg);
  EXPECT_EQ(a.model, b.model);
  EXPECT_EQ(a.epoch_loss, b.epoch_loss);
}

TEST(Predict, RestrictionAndTies) {
  const auto zero = MlpModel::zeros({2, 2, 10});
  const std::vector<double> x{0.3, 0.3};
  EXPECT_EQ(predict(zero, x), 0);
  EXPECT_EQ(predict(zero, x, LabelSet{1, 9}), 1);
  EXPECT_EQ(predict(zero, x, LabelSet{7}), 7);
  try {
    predict(zero, x, LabelSet{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyAllowedSet);
  }

  auto m = MlpModel::zeros({2, 2, 10});
  m.output_biases = {0, 0, 0, 5, 0, 0, 0, 0, 2, 0};
  EXPECT_EQ(predict(m, x), 3);
  EXPECT_EQ(predict(m, x, LabelSet{1, 8, 9}), 8);
}

TEST(Confusion, ZeroModelPutsMassInColumnZero) {
  const auto zero = MlpModel::zeros({1, 1, 10});
  std::vector<LabeledFeatures> data;
  for (Label y = 0; y < 10; ++y) data.push_back({{0.5}, y});
  const auto cm = confusion(zero, data);
  for (Label y = 0; y < 10; ++y) {
    EXPECT_EQ(cm.at(y, 0), 1);
    EXPECT_EQ(cm.row_sum(y), 1);
  }
  EXPECT_EQ(cm.total(), 10);
  EXPECT_DOUBLE_EQ(accuracy(zero, data), 0.1);
}

TEST(ConfusionProperty, AccuracyIsTraceOverTotal) {
  Rng rng(131);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = random_model(rng, {4, 5, 10});
    std::vector<LabeledFeatures> data;
    for (int i = 0; i < 50; ++i) data.push_back({random_vector(rng, 4), static_cast<Label>(rng.below(10))});
    const auto cm = confusion(m, data);
    std::size_t correct = 0;
    for (const auto& s : data) correct += predict(m, s.features) == s.label;
    EXPECT_EQ(cm.total(), 50);
    EXPECT_EQ(cm.trace(), static_cast<std::int64_t>(correct));
    EXPECT_EQ(accuracy(m, data), static_cast<double>(cm.trace()) / 50.0);
  }
}

TEST(Model, ValidateCatchesShapeAndNonFinite) {
  auto m = MlpModel::zeros({2, 3, 10});
  EXPECT_NO_THROW(m.validate());
  m.hidden_weights.pop_back();
  EXPECT_THROW(m.validate(), Error);
  m = MlpModel::zeros({2, 3, 10});
  m.output_biases[4] = std::nan("");
  EXPECT_THROW(m.validate(), Error);
}

}  // namespace
}  // namespace digits
