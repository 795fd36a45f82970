#pragma once

#include <array>
#include <vector>

#include "lfqa/lightfield.hpp"

namespace lfqa {

/// Per-pixel gradient direction of an EPI in degrees, range [-180, 180).
/// Directions come from atan2(-Ey, Ex) on the Sobel responses (correlation
/// with the printed kernels), +180 mapped to -180 and atan2(0,0) taken as 0.
/// Requires the EPI to be at least 3x3 (TooSmall otherwise).
Image gradient_direction_map(const EpiSlice& epi);

struct GddStats {
  double mean = 0.0;
  double entropy = 0.0;   // bits, over the quantized direction histogram
  double skewness = 0.0;  // raw directions; 0 by convention at zero variance
  double kurtosis = 0.0;  // plain; 0 by convention at zero variance
};

/// 360-bin quantization of a direction map: bin b covers [b-180, b-179) deg.
/// Returned histogram is normalized to unit mass.
std::vector<double> direction_histogram(const Image& dir_map, int bins = 360);

GddStats gdd_stats(const Image& dir_map, int bins = 360);

struct GddCfg {
  int bins = 360;
};

struct GddFeatures {
  std::vector<double> values;     // 4 per present orientation
  bool vertical_present = false;  // vertical stats come first when present
  bool horizontal_present = false;
};

/// Mean / entropy / skewness / kurtosis of each EPI's direction map, averaged
/// arithmetically over all EPIs of an orientation (fixed enumeration order).
/// Degenerate orientations are omitted; NoUsableEpis when none remain.
GddFeatures gdd_features(const LightField& lf, const GddCfg& cfg = {});

/// Pooled normalized direction histogram over every EPI of one orientation
/// (the Fig-7-style dump and the distortion-signature tests use this).
std::vector<double> gdd_orientation_histogram(const LightField& lf, EpiOrientation orientation,
                                              int bins = 360);

}  // namespace lfqa
