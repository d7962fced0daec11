#include "digits/labels.hpp"

#include <sstream>

#include "digits/error.hpp"

namespace digits {

bool is_valid_label(Label label) noexcept { return label >= 0 && label < kNumClasses; }

LabelSet::LabelSet(std::initializer_list<Label> labels) {
  for (Label l : labels) insert(l);
}

LabelSet LabelSet::all() {
  LabelSet s;
  s.bits_.set();
  return s;
}

LabelSet LabelSet::from_vector(const std::vector<Label>& labels) {
  LabelSet s;
  for (Label l : labels) s.insert(l);
  return s;
}

void LabelSet::insert(Label label) {
  if (!is_valid_label(label)) {
    throw Error(ErrorCode::InvalidArgument, "label out of range: " + std::to_string(label));
  }
  bits_.set(static_cast<std::size_t>(label));
}

bool LabelSet::contains(Label label) const {
  return is_valid_label(label) && bits_.test(static_cast<std::size_t>(label));
}

std::vector<Label> LabelSet::members() const {
  std::vector<Label> out;
  for (Label l = 0; l < kNumClasses; ++l) {
    if (bits_.test(static_cast<std::size_t>(l))) out.push_back(l);
  }
  return out;
}

Label LabelSet::smallest() const {
  for (Label l = 0; l < kNumClasses; ++l) {
    if (bits_.test(static_cast<std::size_t>(l))) return l;
  }
  throw Error(ErrorCode::EmptyAllowedSet, "empty label set has no smallest member");
}

std::string LabelSet::to_string() const {
  std::string out;
  for (Label l : members()) {
    if (!out.empty()) out += ',';
    out += std::to_string(l);
  }
  return out;
}

LabelSet LabelSet::parse(const std::string& text) {
  LabelSet s;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "not a label: '" + item + "'");
    }
    if (used != item.size()) throw Error(ErrorCode::InvalidArgument, "not a label: '" + item + "'");
    s.insert(value);
  }
  return s;
}

ConfusionMatrix::ConfusionMatrix(
    const std::array<std::array<std::int64_t, kNumClasses>, kNumClasses>& counts)
    : counts_(counts) {
  for (const auto& row : counts_) {
    for (std::int64_t v : row) {
      if (v < 0) throw Error(ErrorCode::InvalidArgument, "negative confusion count");
    }
  }
}

void ConfusionMatrix::add(Label truth, Label predicted, std::int64_t n) {
  if (!is_valid_label(truth) || !is_valid_label(predicted)) {
    throw Error(ErrorCode::InvalidArgument, "confusion index out of range");
  }
  counts_[truth][predicted] += n;
}

std::int64_t ConfusionMatrix::total() const {
  std::int64_t sum = 0;
  for (const auto& row : counts_)
    for (std::int64_t v : row) sum += v;
  return sum;
}

std::int64_t ConfusionMatrix::trace() const {
  std::int64_t sum = 0;
  for (int i = 0; i < kNumClasses; ++i) sum += counts_[i][i];
  return sum;
}

std::int64_t ConfusionMatrix::row_sum(Label truth) const {
  std::int64_t sum = 0;
  for (std::int64_t v : counts_.at(truth)) sum += v;
  return sum;
}

ConfusionMatrix ConfusionMatrix::transpose() const {
  ConfusionMatrix t;
  for (int i = 0; i < kNumClasses; ++i)
    for (int j = 0; j < kNumClasses; ++j) t.counts_[j][i] = counts_[i][j];
  return t;
}

}  // namespace digits
