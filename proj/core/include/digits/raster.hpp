#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace digits {

inline constexpr int kCanvas = 32;

/// Row-major 8-bit grayscale raster.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, std::vector<std::uint8_t> pixels);
  GrayImage(int width, int height, std::uint8_t fill);

  int width() const { return width_; }
  int height() const { return height_; }
  std::uint8_t at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  void set(int x, int y, std::uint8_t v) { pixels_[static_cast<std::size_t>(y) * width_ + x] = v; }
  std::span<const std::uint8_t> pixels() const { return pixels_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Row-major foreground mask; 1 is ink.
class BinaryImage {
 public:
  BinaryImage() = default;
  BinaryImage(int width, int height);
  BinaryImage(int width, int height, std::vector<std::uint8_t> bits);

  int width() const { return width_; }
  int height() const { return height_; }
  bool at(int x, int y) const { return bits_[static_cast<std::size_t>(y) * width_ + x] != 0; }
  void set(int x, int y, bool ink) { bits_[static_cast<std::size_t>(y) * width_ + x] = ink ? 1 : 0; }
  std::span<const std::uint8_t> bits() const { return bits_; }

  bool is_canonical() const { return width_ == kCanvas && height_ == kCanvas; }
  std::size_t foreground_count() const;

  /// 0 for ink, 255 for background.
  GrayImage render() const;
  BinaryImage mirrored_horizontally() const;

  friend bool operator==(const BinaryImage&, const BinaryImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

struct OtsuThreshold {};
struct FixedThreshold {
  std::uint8_t value = 128;
};
using ThresholdMode = std::variant<OtsuThreshold, FixedThreshold>;

/// Otsu threshold T under the "foreground iff intensity < T" convention.
/// Returns 0 when no threshold separates two non-empty classes.
int otsu_threshold(const GrayImage& img);

BinaryImage binarize(const GrayImage& img, ThresholdMode mode = OtsuThreshold{});

/// Crops to the foreground bounding box and rescales to 32x32.
/// Throws Error(BlankImage) when there is no foreground.
BinaryImage normalize(const BinaryImage& img);

}  // namespace digits
