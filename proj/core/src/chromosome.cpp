#include "digits/chromosome.hpp"

#include "digits/error.hpp"

namespace digits {

Chromosome Chromosome::from_windows(std::initializer_list<std::size_t> windows) {
  Chromosome c;
  for (std::size_t w : windows) {
    if (w >= kNumWindows) throw Error(ErrorCode::InvalidArgument, "window index out of range");
    c.set(w);
  }
  return c;
}

Chromosome Chromosome::all() {
  Chromosome c;
  c.bits_.set();
  return c;
}

Chromosome Chromosome::parse(const std::string& text) {
  if (text.size() != kNumWindows) {
    throw Error(ErrorCode::InvalidArgument, "chromosome must have 9 bits, got '" + text + "'");
  }
  Chromosome c;
  for (std::size_t i = 0; i < kNumWindows; ++i) {
    if (text[i] == '1') {
      c.set(i);
    } else if (text[i] != '0') {
      throw Error(ErrorCode::InvalidArgument, "chromosome must be binary, got '" + text + "'");
    }
  }
  return c;
}

std::vector<std::size_t> Chromosome::selected() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < kNumWindows; ++i)
    if (bits_.test(i)) out.push_back(i);
  return out;
}

std::string Chromosome::to_string() const {
  std::string s(kNumWindows, '0');
  for (std::size_t i = 0; i < kNumWindows; ++i)
    if (bits_.test(i)) s[i] = '1';
  return s;
}

std::size_t hamming_distance(const Chromosome& a, const Chromosome& b) {
  return std::bitset<kNumWindows>(a.key() ^ b.key()).count();
}

}  // namespace digits
