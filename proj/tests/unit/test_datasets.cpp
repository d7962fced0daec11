#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "digits/datasets.hpp"
#include "digits/error.hpp"
#include "fixtures.hpp"

namespace digits {
namespace {

using testing::idx_images;
using testing::idx_labels;
using testing::TempDir;
using testing::write_bytes;
using testing::write_text;

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no digits::Error thrown";
  return ErrorCode::Io;
}

std::vector<Label> labels_of(const std::vector<LabeledImage>& data) {
  std::vector<Label> out;
  for (const auto& s : data) out.push_back(s.label);
  return out;
}

TEST(Idx, HandBuiltSingleImage) {
  TempDir dir;
  write_bytes(dir / "img", idx_images(0x803, 1, 2, 2, {0, 128, 255, 7}));
  write_bytes(dir / "lbl", idx_labels(0x801, 1, {6}));
  const auto data = load_idx(dir / "img", dir / "lbl");
  ASSERT_EQ(data.size(), 1u);
  EXPECT_EQ(data[0].label, 6);
  const auto& g = std::get<GrayImage>(data[0].image);
  EXPECT_EQ(g, GrayImage(2, 2, {0, 128, 255, 7}));
  EXPECT_EQ(g.at(1, 0), 128);
  EXPECT_EQ(g.at(0, 1), 255);
}

TEST(Idx, MultiImageNonSquare) {
  TempDir dir;
  std::vector<std::uint8_t> px;
  for (int i = 0; i < 3 * 2 * 3; ++i) px.push_back(static_cast<std::uint8_t>(i * 10));
  write_bytes(dir / "img", idx_images(0x803, 3, 2, 3, px));
  write_bytes(dir / "lbl", idx_labels(0x801, 3, {9, 0, 4}));
  const auto data = load_idx(dir / "img", dir / "lbl");
  ASSERT_EQ(data.size(), 3u);
  EXPECT_EQ(labels_of(data), (std::vector<Label>{9, 0, 4}));
  const auto& g = std::get<GrayImage>(data[2].image);
  EXPECT_EQ(g.width(), 3);
  EXPECT_EQ(g.height(), 2);
  EXPECT_EQ(g.at(2, 1), 170);
}

TEST(Idx, Errors) {
  TempDir dir;
  write_bytes(dir / "img", idx_images(0x803, 3, 1, 1, {1, 2, 3}));
  write_bytes(dir / "lbl2", idx_labels(0x801, 2, {1, 2}));
  write_bytes(dir / "lbl3", idx_labels(0x801, 3, {1, 2, 3}));
  write_bytes(dir / "short", idx_images(0x803, 3, 1, 1, {1, 2}));
  write_bytes(dir / "bad_lbl", idx_labels(0x801, 3, {1, 12, 3}));
  EXPECT_EQ(code_of([&] { load_idx(dir / "lbl3", dir / "lbl3"); }), ErrorCode::BadMagic);
  EXPECT_EQ(code_of([&] { load_idx(dir / "img", dir / "img"); }), ErrorCode::BadMagic);
  EXPECT_EQ(code_of([&] { load_idx(dir / "img", dir / "lbl2"); }), ErrorCode::CountMismatch);
  EXPECT_EQ(code_of([&] { load_idx(dir / "short", dir / "lbl3"); }), ErrorCode::TruncatedFile);
  EXPECT_EQ(code_of([&] { load_idx(dir / "img", dir / "missing"); }), ErrorCode::Io);
  EXPECT_EQ(code_of([&] { load_idx(dir / "img", dir / "bad_lbl"); }), ErrorCode::InvalidArgument);
  write_bytes(dir / "stub", {0, 0, 8});
  EXPECT_EQ(code_of([&] { load_idx(dir / "stub", dir / "lbl3"); }), ErrorCode::TruncatedFile);
}

TEST(Idx, SaveRoundTripIsByteExact) {
  TempDir dir;
  const auto synth = synth_digits(2, 3, 0.1);
  save_idx(synth, dir / "img", dir / "lbl");
  const auto back = load_idx(dir / "img", dir / "lbl");
  ASSERT_EQ(back.size(), synth.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].label, synth[i].label);
    EXPECT_EQ(std::get<GrayImage>(back[i].image), std::get<GrayImage>(synth[i].image));
  }
  const auto img_bytes = testing::read_text(dir / "img");
  EXPECT_EQ(img_bytes.size(), 16 + 20u * 32 * 32);
  EXPECT_EQ(static_cast<unsigned char>(img_bytes[3]), 0x03);
}

TEST(Pgm, RoundTripAndHeaderComments) {
  TempDir dir;
  const GrayImage img(3, 2, {0, 50, 100, 150, 200, 250});
  write_pgm(img, dir / "a.pgm");
  EXPECT_EQ(read_pgm(dir / "a.pgm"), img);

  std::string text = "P5\n# made by hand\n3 2\n# another\n255\n";
  text += std::string("\x00\x01\x02\x03\x04\x05", 6);
  write_text(dir / "b.pgm", text);
  EXPECT_EQ(read_pgm(dir / "b.pgm"), GrayImage(3, 2, {0, 1, 2, 3, 4, 5}));
}

TEST(Pgm, SmallMaxvalIsRescaled) {
  TempDir dir;
  std::string text = "P5 2 1 15\n";
  text += std::string("\x00\x0f", 2);
  write_text(dir / "c.pgm", text);
  EXPECT_EQ(read_pgm(dir / "c.pgm"), GrayImage(2, 1, {0, 255}));
}

TEST(LoadDir, MissingAndEmpty) {
  TempDir dir;
  EXPECT_EQ(code_of([&] { load_dir(dir / "nope"); }), ErrorCode::MissingRoot);
  for (int d = 0; d < 10; ++d) std::filesystem::create_directories(dir / std::to_string(d));
  EXPECT_EQ(code_of([&] { load_dir(dir.path()); }), ErrorCode::NoSamples);
}

TEST(LoadDir, SingleSample) {
  TempDir dir;
  std::filesystem::create_directories(dir.path() / "7");
  write_pgm(GrayImage(4, 4, 9), dir.path() / "7" / "x.pgm");
  const auto r = load_dir(dir.path());
  ASSERT_EQ(r.samples.size(), 1u);
  EXPECT_EQ(r.samples[0].label, 7);
  EXPECT_EQ(r.skipped, 0u);
}

TEST(LoadDir, MixedFilesAndOrder) {
  TempDir dir;
  for (const char* sub : {"0", "3", "extra"}) std::filesystem::create_directories(dir.path() / sub);
  write_pgm(GrayImage(2, 2, 1), dir.path() / "3" / "b.pgm");
  write_pgm(GrayImage(2, 2, 2), dir.path() / "3" / "a.pgm");
  write_pgm(GrayImage(2, 2, 3), dir.path() / "0" / "z.pgm");
  write_text(dir.path() / "3" / "notes.txt", "hello");
  write_text(dir.path() / "5" / "p2.pgm", "P2\n1 1\n255\n0\n");
  write_pgm(GrayImage(2, 2, 4), dir.path() / "extra" / "ignored.pgm");
  const auto r = load_dir(dir.path());
  EXPECT_EQ(r.skipped, 2u);
  ASSERT_EQ(r.samples.size(), 3u);
  EXPECT_EQ(labels_of(r.samples), (std::vector<Label>{0, 3, 3}));
  EXPECT_EQ(std::get<GrayImage>(r.samples[1].image).at(0, 0), 2);
  EXPECT_EQ(std::get<GrayImage>(r.samples[2].image).at(0, 0), 1);
}

TEST(Synth, CountsBalanceAndDeterminism) {
  const auto a = synth_digits(200, 5, 0.0);
  ASSERT_EQ(a.size(), 2000u);
  std::map<Label, int> per;
  for (const auto& s : a) {
    ++per[s.label];
    const auto& g = std::get<GrayImage>(s.image);
    EXPECT_EQ(g.width(), 32);
    EXPECT_EQ(g.height(), 32);
  }
  for (Label y = 0; y < 10; ++y) EXPECT_EQ(per[y], 200);
  const auto b = synth_digits(200, 5, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(std::get<GrayImage>(a[i].image), std::get<GrayImage>(b[i].image));
    EXPECT_EQ(a[i].label, b[i].label);
  }
  const auto c = synth_digits(200, 6, 0.0);
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += std::get<GrayImage>(a[i].image) == std::get<GrayImage>(c[i].image);
  EXPECT_LT(same, a.size());
}

TEST(Synth, TemplatesAreDistinctAndInked) {
  std::vector<std::string> rendered;
  for (Label y = 0; y < 10; ++y) {
    const auto rows = glyph_template(y);
    ASSERT_EQ(rows.size(), 16u);
    std::string all;
    for (const char* r : rows) {
      ASSERT_EQ(std::string(r).size(), 16u);
      all += r;
    }
    EXPECT_NE(all.find('#'), std::string::npos);
    rendered.push_back(all);
  }
  std::sort(rendered.begin(), rendered.end());
  EXPECT_EQ(std::unique(rendered.begin(), rendered.end()), rendered.end());
}

TEST(Synth, NoiseFlipsAboutTheRequestedShare) {
  const auto clean = synth_digits(20, 9, 0.0);
  const auto noisy = synth_digits(20, 9, 0.1);
  std::size_t flipped = 0, total = 0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const auto& a = std::get<GrayImage>(clean[i].image).pixels();
    const auto& b = std::get<GrayImage>(noisy[i].image).pixels();
    for (std::size_t k = 0; k < a.size(); ++k) {
      flipped += a[k] != b[k];
      ++total;
    }
  }
  EXPECT_NEAR(static_cast<double>(flipped) / static_cast<double>(total), 0.1, 0.01);
}

TEST(Split, SixThousandSplitTwoToOne) {
  std::vector<Label> labels;
  for (int i = 0; i < 6000; ++i) labels.push_back(i % 10);
  const auto s = split_indices(labels, SplitSpec{});
  EXPECT_EQ(s.train.size(), 4000u);
  EXPECT_EQ(s.test.size(), 2000u);
}

TEST(Split, FloorPerClass) {
  std::vector<Label> labels;
  for (int i = 0; i < 100; ++i) labels.push_back(i % 10);
  SplitSpec spec;
  spec.train_fraction = 0.95;
  const auto s = split_indices(labels, spec);
  std::map<Label, int> train_per;
  for (auto i : s.train) ++train_per[labels[i]];
  for (Label y = 0; y < 10; ++y) EXPECT_EQ(train_per[y], 9);
  EXPECT_EQ(s.test.size(), 10u);
}

TEST(Split, RejectsBadFractionAndEmpty) {
  SplitSpec spec;
  spec.train_fraction = 1.0;
  EXPECT_THROW(spec.validate(), Error);
  spec.train_fraction = 0.0;
  EXPECT_THROW(spec.validate(), Error);
  EXPECT_EQ(code_of([] { split_indices({}, SplitSpec{}); }), ErrorCode::EmptyDataset);
}

TEST(SplitProperty, PartitionAndDeterminism) {
  std::mt19937_64 gen(77);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + gen() % 300;
    std::vector<Label> labels(n);
    for (auto& l : labels) l = static_cast<Label>(gen() % 10);
    SplitSpec spec;
    spec.train_fraction = 0.05 + 0.9 * static_cast<double>(gen() % 1000) / 1000.0;
    spec.seed = gen();
    spec.stratified = gen() % 2 == 0;
    const auto s = split_indices(labels, spec);
    std::vector<std::size_t> all = s.train;
    all.insert(all.end(), s.test.begin(), s.test.end());
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(all[i], i);
    ASSERT_TRUE(std::is_sorted(s.train.begin(), s.train.end()));
    ASSERT_TRUE(std::is_sorted(s.test.begin(), s.test.end()));
    const auto again = split_indices(labels, spec);
    ASSERT_EQ(again.train, s.train);
  }
}

}  // namespace
}  // namespace digits
