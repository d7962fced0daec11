#include "digits/grouping.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <string>

#include "digits/error.hpp"

namespace digits {

GroupTable::GroupTable(std::vector<LabelSet> groups) : groups_(std::move(groups)) {
  LabelSet seen;
  for (const auto& g : groups_) {
    if (g.size() < 2) throw Error(ErrorCode::InvalidArgument, "group {" + g.to_string() + "} has fewer than 2 members");
    for (Label l : g.members()) {
      if (seen.contains(l)) throw Error(ErrorCode::InvalidArgument, "label " + std::to_string(l) + " in two groups");
      seen.insert(l);
    }
  }
  std::sort(groups_.begin(), groups_.end(),
            [](const LabelSet& a, const LabelSet& b) { return a.smallest() < b.smallest(); });
}

std::optional<std::size_t> GroupTable::group_of(Label label) const {
  for (std::size_t g = 0; g < groups_.size(); ++g)
    if (groups_[g].contains(label)) return g;
  return std::nullopt;
}

std::int64_t mutual_confusion(const ConfusionMatrix& cm, Label i, Label j) {
  if (i == j) throw Error(ErrorCode::SameLabel, "mutual confusion needs two distinct labels");
  return cm.at(i, j) + cm.at(j, i);
}

std::vector<ConfusedPair> qualifying_pairs(const ConfusionMatrix& cm, std::int64_t tau) {
  std::vector<ConfusedPair> pairs;
  for (Label a = 0; a < kNumClasses; ++a) {
    for (Label b = a + 1; b < kNumClasses; ++b) {
      const std::int64_t m = mutual_confusion(cm, a, b);
      if (m >= tau) pairs.push_back({a, b, m});
    }
  }
  return pairs;
}

GroupTable form_groups(const ConfusionMatrix& cm, std::int64_t tau) {
  if (tau < 1) throw Error(ErrorCode::InvalidArgument, "tau must be at least 1");

  std::array<int, kNumClasses> parent{};
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& p : qualifying_pairs(cm, tau)) {
    const int ra = find(p.a);
    const int rb = find(p.b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }

  std::array<LabelSet, kNumClasses> components{};
  for (Label l = 0; l < kNumClasses; ++l) components[find(l)].insert(l);
  std::vector<LabelSet> groups;
  for (const auto& c : components)
    if (c.size() >= 2) groups.push_back(c);
  return GroupTable(std::move(groups));
}

}  // namespace digits
