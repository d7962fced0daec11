#include <gtest/gtest.h>

#include <algorithm>

#include "digits/error.hpp"
#include "digits/features.hpp"
#include "oracles.hpp"

namespace digits {
namespace {

using testing::naive_line_count;
using testing::naive_longest_run;
using testing::naive_octant;
using testing::naive_shadow_features;
using testing::random_image;

constexpr RunDirection kDirections[] = {RunDirection::Row, RunDirection::Column, RunDirection::MainDiagonal,
                                        RunDirection::AntiDiagonal};

BinaryImage filled(bool ink) {
  BinaryImage img(kCanvas, kCanvas);
  for (int y = 0; y < kCanvas; ++y)
    for (int x = 0; x < kCanvas; ++x) img.set(x, y, ink);
  return img;
}

TEST(WindowTable, Coordinates) {
  const int expected[9][4] = {{0, 0, 16, 16},  {0, 16, 16, 32}, {8, 0, 24, 16},  {16, 0, 32, 16}, {16, 16, 32, 32},
                              {16, 8, 32, 24}, {0, 8, 16, 24},  {8, 16, 24, 32}, {8, 8, 24, 24}};
  const auto& table = window_table();
  for (std::size_t i = 0; i < kNumWindows; ++i) {
    EXPECT_EQ(table[i].index, static_cast<int>(i));
    EXPECT_EQ(table[i].x0, expected[i][0]);
    EXPECT_EQ(table[i].y0, expected[i][1]);
    EXPECT_EQ(table[i].x1, expected[i][2]);
    EXPECT_EQ(table[i].y1, expected[i][3]);
  }
}

TEST(WindowTable, MirrorMapsRectangles) {
  const auto& table = window_table();
  for (std::size_t i = 0; i < kNumWindows; ++i) {
    const auto& w = table[i];
    const auto& m = table[mirrored_window(i)];
    EXPECT_EQ(m.x0, kCanvas - w.x1);
    EXPECT_EQ(m.x1, kCanvas - w.x0);
    EXPECT_EQ(m.y0, w.y0);
    EXPECT_EQ(m.y1, w.y1);
    EXPECT_EQ(mirrored_window(mirrored_window(i)), i);
  }
}

TEST(ShadowGeometry, MatchesTriangleOracle) {
  const auto& g = detail::shadow_geometry();
  for (int y = 0; y < kCanvas; ++y)
    for (int x = 0; x < kCanvas; ++x) ASSERT_EQ(g.octant[y][x], naive_octant(x, y)) << x << "," << y;
  for (int o = 0; o < 8; ++o)
    for (int k = 0; k < 3; ++k) EXPECT_EQ(g.line_count[o][k], naive_line_count(o, k)) << o << "/" << k;
}

TEST(ShadowGeometry, OctantsAreBalanced) {
  std::array<int, 8> sizes{};
  for (int y = 0; y < kCanvas; ++y)
    for (int x = 0; x < kCanvas; ++x) ++sizes[static_cast<std::size_t>(naive_octant(x, y))];
  int total = 0;
  for (int s : sizes) total += s;
  EXPECT_EQ(total, kCanvas * kCanvas);
  // Diagonal pixels go to the lower-numbered side, so 0,1,3,5 own 16 more.
  EXPECT_EQ(sizes, (std::array<int, 8>{136, 136, 120, 136, 120, 136, 120, 120}));
}

TEST(Shadow, BlankAndFull) {
  for (double v : shadow_features(filled(false))) EXPECT_EQ(v, 0.0);
  for (double v : shadow_features(filled(true))) EXPECT_EQ(v, 1.0);
}

TEST(Shadow, CornerPixel) {
  BinaryImage img(kCanvas, kCanvas);
  img.set(0, 0, true);
  const auto s = shadow_features(img);
  const int o = naive_octant(0, 0);
  EXPECT_EQ(o, 1);
  for (std::size_t i = 0; i < kShadowCount; ++i) {
    if (static_cast<int>(i) / 3 == o) {
      EXPECT_DOUBLE_EQ(s[i], 1.0 / naive_line_count(o, static_cast<int>(i % 3))) << i;
    } else {
      EXPECT_EQ(s[i], 0.0) << i;
    }
  }
  // Frozen: octant 1 has 16 side lines, 16 bisector lines, 31 diagonal lines.
  EXPECT_DOUBLE_EQ(s[3], 1.0 / 16);
  EXPECT_DOUBLE_EQ(s[4], 1.0 / 16);
  EXPECT_DOUBLE_EQ(s[5], 1.0 / 31);
}

TEST(Shadow, WrongSizeThrows) {
  try {
    shadow_features(BinaryImage(16, 16));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(ShadowProperty, MatchesOracleOnRandomImages) {
  Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const auto img = random_image(rng, 0.01 + 0.2 * rng.uniform01());
    const auto got = shadow_features(img);
    const auto want = naive_shadow_features(img);
    for (std::size_t i = 0; i < kShadowCount; ++i) ASSERT_DOUBLE_EQ(got[i], want[i]) << trial << "/" << i;
  }
}

TEST(LongestRun, FullAndEmptyWindows) {
  for (const auto& w : window_table()) {
    for (auto d : kDirections) {
      EXPECT_EQ(longest_run(filled(true), w, d), 1.0);
      EXPECT_EQ(longest_run(filled(false), w, d), 0.0);
    }
  }
}

TEST(LongestRun, SingleFullRow) {
  const auto& w = window_table()[8];
  BinaryImage img(kCanvas, kCanvas);
  for (int x = w.x0; x < w.x1; ++x) img.set(x, 12, true);
  const auto r = longest_run_window(img, w);
  for (double v : r) EXPECT_DOUBLE_EQ(v, 0.0625);
}

TEST(LongestRun, RunsDoNotLeakAcrossWindowEdge) {
  // Ink right of window 0 must not count toward it.
  BinaryImage img(kCanvas, kCanvas);
  for (int x = 10; x < 24; ++x) img.set(x, 3, true);
  EXPECT_DOUBLE_EQ(longest_run(img, window_table()[0], RunDirection::Row), 6.0 / 256);
}

TEST(LongestRunProperty, MatchesNaiveScanner) {
  Rng rng(29);
  for (int trial = 0; trial < 200; ++trial) {
    const auto img = random_image(rng, rng.uniform01());
    for (const auto& w : window_table())
      for (auto d : kDirections) ASSERT_EQ(longest_run(img, w, d), naive_longest_run(img, w, d)) << trial;
  }
}

TEST(FeaturesProperty, MirrorPermutesWindows) {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto img = random_image(rng, 0.3);
    const auto a = extract_features(img);
    const auto b = extract_features(img.mirrored_horizontally());
    for (std::size_t i = 0; i < kNumWindows; ++i) {
      const auto& src = a.local[i];
      const auto& dst = b.local[mirrored_window(i)];
      EXPECT_EQ(dst[0], src[0]);
      EXPECT_EQ(dst[1], src[1]);
      EXPECT_EQ(dst[2], src[3]);
      EXPECT_EQ(dst[3], src[2]);
    }
  }
}

TEST(FeaturesProperty, MonotoneUnderAddedInk) {
  Rng rng(37);
  for (int trajectory = 0; trajectory < 30; ++trajectory) {
    BinaryImage img(kCanvas, kCanvas);
    auto prev = extract_features(img);
    for (int step = 0; step < 60; ++step) {
      img.set(static_cast<int>(rng.below(kCanvas)), static_cast<int>(rng.below(kCanvas)), true);
      const auto next = extract_features(img);
      for (std::size_t i = 0; i < kShadowCount; ++i) ASSERT_GE(next.shadow[i], prev.shadow[i]);
      for (std::size_t w = 0; w < kNumWindows; ++w)
        for (std::size_t d = 0; d < kRunDirections; ++d) ASSERT_GE(next.local[w][d], prev.local[w][d]);
      prev = next;
    }
  }
}

TEST(Assemble, WidthsAndLayout) {
  Rng rng(41);
  const auto img = random_image(rng, 0.4);
  const auto f = extract_features(img);
  EXPECT_EQ(assemble_features(img, Chromosome{}).size(), 24u);
  EXPECT_EQ(assemble_features(img, Chromosome::from_windows({3, 1, 5})).size(), 36u);
  EXPECT_EQ(assemble_features(img, Chromosome::from_windows({4, 5})).size(), 32u);
  const auto v = assemble_features(f, Chromosome::from_windows({5, 1}));
  for (std::size_t i = 0; i < 24; ++i) EXPECT_EQ(v[i], f.shadow[i]);
  for (std::size_t d = 0; d < 4; ++d) {
    EXPECT_EQ(v[24 + d], f.local[1][d]);
    EXPECT_EQ(v[28 + d], f.local[5][d]);
  }
}

TEST(AssembleProperty, LengthLawAllChromosomes) {
  Rng rng(43);
  const auto f = extract_features(random_image(rng, 0.5));
  for (std::uint32_t key = 0; key < 512; ++key) {
    const auto c = Chromosome::from_key(key);
    const auto v = assemble_features(f, c);
    ASSERT_EQ(v.size(), 24 + 4 * c.popcount());
    ASSERT_EQ(feature_width(c), v.size());
    ASSERT_EQ(feature_names(c).size(), v.size());
    for (double x : v) ASSERT_TRUE(x >= 0.0 && x <= 1.0);
  }
}

TEST(Assemble, FeatureNames) {
  const auto names = feature_names(Chromosome::from_windows({2}));
  ASSERT_EQ(names.size(), 28u);
  EXPECT_EQ(names[0], "shadow_00");
  EXPECT_EQ(names[23], "shadow_23");
  EXPECT_EQ(names[24], "w2_row");
  EXPECT_EQ(names[25], "w2_col");
  EXPECT_EQ(names[26], "w2_diag");
  EXPECT_EQ(names[27], "w2_adiag");
}

TEST(ChromosomeText, ParseAndFormat) {
  const auto c = Chromosome::parse("000011111");
  EXPECT_EQ(c.selected(), (std::vector<std::size_t>{4, 5, 6, 7, 8}));
  EXPECT_EQ(c.to_string(), "000011111");
  EXPECT_EQ(Chromosome::from_key(c.key()), c);
  for (const char* bad : {"", "00001111", "0000111110", "00001111x"}) EXPECT_THROW(Chromosome::parse(bad), Error);
}

}  // namespace
}  // namespace digits
