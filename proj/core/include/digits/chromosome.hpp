#pragma once

#include <bitset>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace digits {

inline constexpr std::size_t kNumWindows = 9;

/// Window-subset encoding: bit i selects window i of the window table.
/// The string form writes bit 0 first, so "000011111" selects windows 4..8.
class Chromosome {
 public:
  Chromosome() = default;
  explicit Chromosome(std::bitset<kNumWindows> bits) : bits_(bits) {}

  static Chromosome from_windows(std::initializer_list<std::size_t> windows);
  static Chromosome all();
  /// Throws Error(InvalidArgument) unless text is exactly nine '0'/'1' characters.
  static Chromosome parse(const std::string& text);

  bool test(std::size_t i) const { return bits_.test(i); }
  void set(std::size_t i, bool v = true) { bits_.set(i, v); }
  void flip(std::size_t i) { bits_.flip(i); }
  std::size_t popcount() const { return bits_.count(); }
  std::vector<std::size_t> selected() const;

  /// Compact key, bit i of the integer = bit i of the chromosome.
  std::uint32_t key() const { return static_cast<std::uint32_t>(bits_.to_ulong()); }
  static Chromosome from_key(std::uint32_t key) { return Chromosome(std::bitset<kNumWindows>(key)); }

  std::string to_string() const;

  friend bool operator==(const Chromosome&, const Chromosome&) = default;

 private:
  std::bitset<kNumWindows> bits_;
};

std::size_t hamming_distance(const Chromosome& a, const Chromosome& b);

}  // namespace digits
