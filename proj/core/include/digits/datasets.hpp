#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "digits/labels.hpp"
#include "digits/raster.hpp"

namespace digits {

struct LabeledImage {
  std::variant<GrayImage, BinaryImage> image;
  Label label = 0;
  std::string source;
};

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

/// Big-endian IDX image/label pair. Throws Error(BadMagic | CountMismatch |
/// TruncatedFile | Io).
std::vector<LabeledImage> load_idx(const std::filesystem::path& images, const std::filesystem::path& labels);

/// Writes the IDX pair; only grayscale images of one common size are accepted.
void save_idx(std::span<const LabeledImage> data, const std::filesystem::path& images,
              const std::filesystem::path& labels);

struct DirectoryLoad {
  std::vector<LabeledImage> samples;
  /// Files that are not binary PGM (P5, maxval <= 255).
  std::size_t skipped = 0;
};

/// Reads root/<digit>/<file>.pgm in lexicographic order.
/// Throws Error(MissingRoot) or Error(NoSamples).
DirectoryLoad load_dir(const std::filesystem::path& root);

GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const GrayImage& img, const std::filesystem::path& path);

/// Built-in 16x16 glyph template for a class, as 16 rows of '#'/'.'.
std::span<const char* const> glyph_template(Label label);

/// Synthetic digits: template scaled by 1 +- 15%, shifted +-3 px on a
/// 32x32 canvas, every pixel flipped with probability `noise`. Ink is 0,
/// paper is 255.
std::vector<LabeledImage> synth_digits(std::size_t per_class, std::uint64_t seed, double noise);

struct SplitSpec {
  double train_fraction = 2.0 / 3.0;
  std::uint64_t seed = 1;
  bool stratified = true;

  void validate() const;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Index-level split. Stratified: per label, seeded shuffle, first
/// floor(fraction * n_label) to train. Both outputs keep input order.
SplitIndices split_indices(std::span<const Label> labels, const SplitSpec& spec);

std::pair<std::vector<LabeledImage>, std::vector<LabeledImage>> split(std::span<const LabeledImage> data,
                                                                      const SplitSpec& spec);

}  // namespace digits
