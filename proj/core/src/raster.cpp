#include "digits/raster.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "digits/error.hpp"

namespace digits {

namespace {

void check_dims(int width, int height, std::size_t buffer) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::InvalidArgument,
                "image dimensions must be positive, got " + std::to_string(width) + "x" +
                    std::to_string(height));
  }
  if (buffer != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorCode::DimensionMismatch, "pixel buffer length does not match dimensions");
  }
}

// Source interval [first, last) feeding output cell `out` when `src`
// pixels are mapped onto kCanvas cells. Upscaling degenerates to one
// nearest-neighbour pixel; downscaling partitions the source.
std::pair<int, int> preimage(int out, int src) {
  int first = out * src / kCanvas;
  int last = std::max((out + 1) * src / kCanvas, first + 1);
  return {first, last};
}

}  // namespace

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_dims(width_, height_, pixels_.size());
}

GrayImage::GrayImage(int width, int height, std::uint8_t fill)
    : GrayImage(width, height,
                std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(width, 0)) *
                                              static_cast<std::size_t>(std::max(height, 0)),
                                          fill)) {}

BinaryImage::BinaryImage(int width, int height)
    : BinaryImage(width, height,
                  std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(width, 0)) *
                                            static_cast<std::size_t>(std::max(height, 0)))) {}

BinaryImage::BinaryImage(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  check_dims(width_, height_, bits_.size());
  for (auto& b : bits_) b = b ? 1 : 0;
}

std::size_t BinaryImage::foreground_count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

GrayImage BinaryImage::render() const {
  std::vector<std::uint8_t> px(bits_.size());
  std::transform(bits_.begin(), bits_.end(), px.begin(),
                 [](std::uint8_t b) { return b ? std::uint8_t{0} : std::uint8_t{255}; });
  return GrayImage(width_, height_, std::move(px));
}

BinaryImage BinaryImage::mirrored_horizontally() const {
  BinaryImage out(width_, height_);
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x) out.set(width_ - 1 - x, y, at(x, y));
  return out;
}

int otsu_threshold(const GrayImage& img) {
  std::array<double, 256> hist{};
  for (std::uint8_t p : img.pixels()) hist[p] += 1.0;
  const double total = static_cast<double>(img.pixels().size());
  double sum_all = 0.0;
  for (int i = 0; i < 256; ++i) sum_all += i * hist[i];

  // Threshold t puts intensities [0, t) in the foreground class.
  int best_t = 0;
  double best_var = 0.0;
  double w_fg = 0.0;
  double sum_fg = 0.0;
  for (int t = 1; t <= 255; ++t) {
    w_fg += hist[t - 1];
    sum_fg += (t - 1) * hist[t - 1];
    const double w_bg = total - w_fg;
    if (w_fg == 0.0 || w_bg == 0.0) continue;
    const double mean_fg = sum_fg / w_fg;
    const double mean_bg = (sum_all - sum_fg) / w_bg;
    const double diff = mean_fg - mean_bg;
    const double between = w_fg * w_bg * diff * diff;
    if (between > best_var) {
      best_var = between;
      best_t = t;
    }
  }
  return best_t;
}

BinaryImage binarize(const GrayImage& img, ThresholdMode mode) {
  const int threshold = std::visit(
      [&](const auto& m) -> int {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, OtsuThreshold>) {
          return otsu_threshold(img);
        } else {
          return m.value;
        }
      },
      mode);
  std::vector<std::uint8_t> bits(img.pixels().size());
  std::transform(img.pixels().begin(), img.pixels().end(), bits.begin(),
                 [threshold](std::uint8_t p) { return p < threshold ? 1 : 0; });
  return BinaryImage(img.width(), img.height(), std::move(bits));
}

BinaryImage normalize(const BinaryImage& img) {
  int x0 = img.width(), y0 = img.height(), x1 = -1, y1 = -1;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (!img.at(x, y)) continue;
      x0 = std::min(x0, x);
      y0 = std::min(y0, y);
      x1 = std::max(x1, x);
      y1 = std::max(y1, y);
    }
  }
  if (x1 < 0) throw Error(ErrorCode::BlankImage, "image has no foreground pixels");

  const int bw = x1 - x0 + 1;
  const int bh = y1 - y0 + 1;
  BinaryImage out(kCanvas, kCanvas);
  for (int oy = 0; oy < kCanvas; ++oy) {
    const auto [sy0, sy1] = preimage(oy, bh);
    for (int ox = 0; ox < kCanvas; ++ox) {
      const auto [sx0, sx1] = preimage(ox, bw);
      bool ink = false;
      for (int sy = sy0; sy < sy1 && !ink; ++sy)
        for (int sx = sx0; sx < sx1 && !ink; ++sx) ink = img.at(x0 + sx, y0 + sy);
      out.set(ox, oy, ink);
    }
  }
  return out;
}

}  // namespace digits
