#pragma once

// Independent reference implementations used only by tests. None of these
// call into the library code paths they check.

#include <array>
#include <cstdint>
#include <set>
#include <vector>

#include "digits/features.hpp"
#include "digits/labels.hpp"
#include "digits/mlp.hpp"
#include "digits/raster.hpp"
#include "digits/random.hpp"

namespace digits::testing {

/// Longest-run sum for one window and direction, by grouping every window
/// pixel by its line key and scanning each line in order.
double naive_longest_run(const BinaryImage& img, const Window& win, RunDirection dir);

/// All thresholds T (foreground iff intensity < T) maximising the
/// between-class variance, computed straight from pixel lists.
std::set<int> otsu_maximisers(const GrayImage& img);

/// Shadow features from triangle containment tests and projections onto
/// the octant's own edge directions.
ShadowFeatures naive_shadow_features(const BinaryImage& img);

/// Octant of a pixel by triangle containment, lowest index on ties.
int naive_octant(int x, int y);

/// Number of projection lines of `kind` (0 side, 1 bisector, 2 diagonal) in octant `o`.
int naive_line_count(int o, int kind);

/// Central finite-difference gradient of the sample loss.
MlpModel finite_difference_gradient(const MlpModel& model, const std::vector<double>& x, Label label, double eps);

BinaryImage random_image(Rng& rng, double density);

/// Confusion matrix printed for the coarse classifier on training data
/// in the reference results (rows = true class).
ConfusionMatrix reference_confusion();

}  // namespace digits::testing
