#pragma once

#include <array>
#include <bitset>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace digits {

inline constexpr int kNumClasses = 10;

using Label = int;

/// Subset of the ten digit classes.
class LabelSet {
 public:
  LabelSet() = default;
  LabelSet(std::initializer_list<Label> labels);

  static LabelSet all();
  static LabelSet from_vector(const std::vector<Label>& labels);

  void insert(Label label);
  bool contains(Label label) const;
  bool empty() const { return bits_.none(); }
  std::size_t size() const { return bits_.count(); }

  /// Members in ascending order.
  std::vector<Label> members() const;
  Label smallest() const;

  /// Comma-joined ascending members, e.g. "0,3,4,5,6".
  std::string to_string() const;
  static LabelSet parse(const std::string& text);

  friend bool operator==(const LabelSet&, const LabelSet&) = default;

 private:
  std::bitset<kNumClasses> bits_;
};

bool is_valid_label(Label label) noexcept;

/// 10x10 count matrix indexed [true][predicted].
class ConfusionMatrix {
 public:
  ConfusionMatrix() { counts_.fill({}); }
  explicit ConfusionMatrix(const std::array<std::array<std::int64_t, kNumClasses>, kNumClasses>& counts);

  std::int64_t at(Label truth, Label predicted) const { return counts_.at(truth).at(predicted); }
  void add(Label truth, Label predicted, std::int64_t n = 1);

  std::int64_t total() const;
  std::int64_t trace() const;
  std::int64_t row_sum(Label truth) const;
  ConfusionMatrix transpose() const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::array<std::array<std::int64_t, kNumClasses>, kNumClasses> counts_{};
};

}  // namespace digits
