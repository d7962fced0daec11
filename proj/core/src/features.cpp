#include "digits/features.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>

#include "digits/error.hpp"

namespace digits {

namespace {

constexpr int kHalf = kCanvas / 2;
constexpr int kQuarter = kCanvas / 4;

void require_canonical(const BinaryImage& img) {
  if (!img.is_canonical()) {
    throw Error(ErrorCode::DimensionMismatch,
                "expected a 32x32 image, got " + std::to_string(img.width()) + "x" +
                    std::to_string(img.height()));
  }
}

int octant_of(int x, int y) {
  // Doubled offsets from the canvas centre; never zero for pixel centres.
  const int u = 2 * x + 1 - kCanvas;
  const int v = kCanvas - 2 * y - 1;
  const int au = std::abs(u);
  const int av = std::abs(v);
  if (v > 0) {
    if (u > 0) return au <= av ? 0 : 7;
    return au <= av ? 1 : 2;
  }
  if (u < 0) return au >= av ? 3 : 4;
  return au <= av ? 5 : 6;
}

detail::ShadowGeometry build_geometry() {
  detail::ShadowGeometry g;
  std::array<std::array<std::uint64_t, 3>, kNumOctants> seen{};
  for (int y = 0; y < kCanvas; ++y) {
    for (int x = 0; x < kCanvas; ++x) {
      const int o = octant_of(x, y);
      g.octant[y][x] = o;
      const bool horizontal_side = o == 0 || o == 1 || o == 4 || o == 5;
      const bool falling_diagonal = o == 0 || o == 7 || o == 3 || o == 4;
      g.line[0][y][x] = horizontal_side ? x : y;
      g.line[1][y][x] = horizontal_side ? y : x;
      g.line[2][y][x] = falling_diagonal ? x - y + (kCanvas - 1) : x + y;
      for (int k = 0; k < 3; ++k) seen[o][k] |= std::uint64_t{1} << g.line[k][y][x];
    }
  }
  for (std::size_t o = 0; o < kNumOctants; ++o)
    for (int k = 0; k < 3; ++k) g.line_count[o][k] = std::popcount(seen[o][k]);
  return g;
}

int longest_run_on_line(const BinaryImage& img, const Window& win, int x, int y, int dx, int dy) {
  int best = 0;
  int current = 0;
  for (; x >= win.x0 && x < win.x1 && y >= win.y0 && y < win.y1; x += dx, y += dy) {
    if (img.at(x, y)) {
      best = std::max(best, ++current);
    } else {
      current = 0;
    }
  }
  return best;
}

}  // namespace

namespace detail {

const ShadowGeometry& shadow_geometry() {
  static const ShadowGeometry geometry = build_geometry();
  return geometry;
}

}  // namespace detail

const WindowTable& window_table() {
  static const WindowTable table = [] {
    constexpr std::array<std::array<int, 2>, kNumWindows> corners{{
        {0, 0},
        {0, kHalf},
        {kQuarter, 0},
        {kHalf, 0},
        {kHalf, kHalf},
        {kHalf, kQuarter},
        {0, kQuarter},
        {kQuarter, kHalf},
        {kQuarter, kQuarter},
    }};
    WindowTable t{};
    for (std::size_t i = 0; i < kNumWindows; ++i) {
      const auto [x, y] = corners[i];
      t[i] = Window{static_cast<int>(i), x, y, x + kHalf, y + kHalf};
    }
    return t;
  }();
  return table;
}

std::size_t mirrored_window(std::size_t index) {
  static constexpr std::array<std::size_t, kNumWindows> mirror{3, 4, 2, 0, 1, 6, 5, 7, 8};
  return mirror.at(index);
}

ShadowFeatures shadow_features(const BinaryImage& img) {
  require_canonical(img);
  const auto& g = detail::shadow_geometry();
  std::array<std::array<std::uint64_t, 3>, kNumOctants> hit{};
  for (int y = 0; y < kCanvas; ++y) {
    for (int x = 0; x < kCanvas; ++x) {
      if (!img.at(x, y)) continue;
      const int o = g.octant[y][x];
      for (int k = 0; k < 3; ++k) hit[o][k] |= std::uint64_t{1} << g.line[k][y][x];
    }
  }
  ShadowFeatures out{};
  for (std::size_t o = 0; o < kNumOctants; ++o) {
    for (int k = 0; k < 3; ++k) {
      out[o * 3 + k] =
          static_cast<double>(std::popcount(hit[o][k])) / static_cast<double>(g.line_count[o][k]);
    }
  }
  return out;
}

double longest_run(const BinaryImage& img, const Window& win, RunDirection dir) {
  require_canonical(img);
  long total = 0;
  switch (dir) {
    case RunDirection::Row:
      for (int y = win.y0; y < win.y1; ++y) total += longest_run_on_line(img, win, win.x0, y, 1, 0);
      break;
    case RunDirection::Column:
      for (int x = win.x0; x < win.x1; ++x) total += longest_run_on_line(img, win, x, win.y0, 0, 1);
      break;
    case RunDirection::MainDiagonal:
      // Lines start on the left edge, then along the top edge.
      for (int y = win.y0; y < win.y1; ++y) total += longest_run_on_line(img, win, win.x0, y, 1, 1);
      for (int x = win.x0 + 1; x < win.x1; ++x) total += longest_run_on_line(img, win, x, win.y0, 1, 1);
      break;
    case RunDirection::AntiDiagonal:
      // Lines start on the right edge, then along the top edge.
      for (int y = win.y0; y < win.y1; ++y) total += longest_run_on_line(img, win, win.x1 - 1, y, -1, 1);
      for (int x = win.x0; x < win.x1 - 1; ++x) total += longest_run_on_line(img, win, x, win.y0, -1, 1);
      break;
  }
  return static_cast<double>(total) / static_cast<double>(win.area());
}

RunFeatures longest_run_window(const BinaryImage& img, const Window& win) {
  return {longest_run(img, win, RunDirection::Row), longest_run(img, win, RunDirection::Column),
          longest_run(img, win, RunDirection::MainDiagonal),
          longest_run(img, win, RunDirection::AntiDiagonal)};
}

ImageFeatures extract_features(const BinaryImage& img) {
  ImageFeatures f;
  f.shadow = shadow_features(img);
  const auto& table = window_table();
  for (std::size_t i = 0; i < kNumWindows; ++i) f.local[i] = longest_run_window(img, table[i]);
  return f;
}

std::size_t feature_width(const Chromosome& chromosome) {
  return kShadowCount + kRunDirections * chromosome.popcount();
}

std::vector<double> assemble_features(const ImageFeatures& features, const Chromosome& chromosome) {
  std::vector<double> out;
  out.reserve(feature_width(chromosome));
  out.insert(out.end(), features.shadow.begin(), features.shadow.end());
  for (std::size_t w : chromosome.selected()) {
    out.insert(out.end(), features.local[w].begin(), features.local[w].end());
  }
  return out;
}

std::vector<double> assemble_features(const BinaryImage& img, const Chromosome& chromosome) {
  require_canonical(img);
  ImageFeatures f;
  f.shadow = shadow_features(img);
  const auto& table = window_table();
  for (std::size_t w : chromosome.selected()) f.local[w] = longest_run_window(img, table[w]);
  return assemble_features(f, chromosome);
}

std::vector<std::string> feature_names(const Chromosome& chromosome) {
  std::vector<std::string> names;
  names.reserve(feature_width(chromosome));
  for (std::size_t i = 0; i < kShadowCount; ++i) {
    names.push_back("shadow_" + std::string(i < 10 ? "0" : "") + std::to_string(i));
  }
  for (std::size_t w : chromosome.selected()) {
    const std::string prefix = "w" + std::to_string(w) + "_";
    for (const char* dir : {"row", "col", "diag", "adiag"}) names.push_back(prefix + dir);
  }
  return names;
}

}  // namespace digits
