#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "digits/labels.hpp"

namespace digits {

/// Disjoint groups of mutually confusable classes, each of size >= 2,
/// ordered by smallest member.
class GroupTable {
 public:
  GroupTable() = default;
  /// Throws Error(InvalidArgument) on overlapping or singleton groups.
  explicit GroupTable(std::vector<LabelSet> groups);

  const std::vector<LabelSet>& groups() const { return groups_; }
  std::size_t size() const { return groups_.size(); }
  bool empty() const { return groups_.empty(); }
  std::optional<std::size_t> group_of(Label label) const;

  friend bool operator==(const GroupTable&, const GroupTable&) = default;

 private:
  std::vector<LabelSet> groups_;
};

/// counts[i][j] + counts[j][i]; throws Error(SameLabel) when i == j.
std::int64_t mutual_confusion(const ConfusionMatrix& cm, Label i, Label j);

struct ConfusedPair {
  Label a = 0;
  Label b = 0;
  std::int64_t count = 0;
};

/// All pairs a < b whose mutual confusion reaches tau, in lexicographic order.
std::vector<ConfusedPair> qualifying_pairs(const ConfusionMatrix& cm, std::int64_t tau);

/// Connected components of size >= 2 in the graph whose edges are the
/// qualifying pairs.
GroupTable form_groups(const ConfusionMatrix& cm, std::int64_t tau);

}  // namespace digits
