#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "digits/chromosome.hpp"
#include "digits/raster.hpp"

namespace digits {

inline constexpr std::size_t kShadowCount = 24;
inline constexpr std::size_t kRunDirections = 4;
inline constexpr std::size_t kNumOctants = 8;

/// Half-open rectangle [x0, x1) x [y0, y1) on the 32x32 canvas.
struct Window {
  int index = 0;
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  int area() const { return width() * height(); }
  friend bool operator==(const Window&, const Window&) = default;
};

using WindowTable = std::array<Window, kNumWindows>;

/// The nine overlapping 16x16 windows on the quarter-pitch 3x3 grid.
const WindowTable& window_table();

/// Index of the window obtained by mirroring `index` left to right.
std::size_t mirrored_window(std::size_t index);

enum class RunDirection { Row = 0, Column = 1, MainDiagonal = 2, AntiDiagonal = 3 };

using ShadowFeatures = std::array<double, kShadowCount>;
/// Row, column, main-diagonal, anti-diagonal.
using RunFeatures = std::array<double, kRunDirections>;

/// Octant-projection occupancy features.
///
/// The canvas is cut into eight triangles by its diagonals and its centre
/// bisectors. Octant 0 is bounded by the right half of the top side; the
/// rest follow counter-clockwise. Pixels on a diagonal belong to the
/// lower-numbered neighbour. For each octant three projections are taken,
/// with lines perpendicular to (a) its half-side, (b) its bisector and (c)
/// its half-diagonal; each value is the fraction of the octant's lines
/// that cross at least one ink pixel of that octant.
ShadowFeatures shadow_features(const BinaryImage& img);

/// Sum over all lines of the window, in one direction, of the longest
/// contiguous ink run on the line, divided by the window area.
double longest_run(const BinaryImage& img, const Window& win, RunDirection dir);
RunFeatures longest_run_window(const BinaryImage& img, const Window& win);

/// All features of one canonical image; the assembled vector for any
/// chromosome is a selection from this.
struct ImageFeatures {
  ShadowFeatures shadow{};
  std::array<RunFeatures, kNumWindows> local{};
};

ImageFeatures extract_features(const BinaryImage& img);

std::size_t feature_width(const Chromosome& chromosome);

/// Shadow features followed by four run features per selected window,
/// in ascending window index.
std::vector<double> assemble_features(const ImageFeatures& features, const Chromosome& chromosome);
std::vector<double> assemble_features(const BinaryImage& img, const Chromosome& chromosome);

/// CSV column names matching assemble_features' layout.
std::vector<std::string> feature_names(const Chromosome& chromosome);

namespace detail {

/// Geometry of the shadow projections; exposed for tests.
struct ShadowGeometry {
  /// octant[y][x] in 0..7
  std::array<std::array<int, kCanvas>, kCanvas> octant{};
  /// line[k][y][x]: index of the projection line of kind k (a, b, c) through the pixel
  std::array<std::array<std::array<int, kCanvas>, kCanvas>, 3> line{};
  /// number of non-empty lines per octant and kind
  std::array<std::array<int, 3>, kNumOctants> line_count{};
};

const ShadowGeometry& shadow_geometry();

}  // namespace detail

}  // namespace digits
