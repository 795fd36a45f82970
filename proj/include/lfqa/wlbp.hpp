#pragma once

#include <cstdint>
#include <vector>

#include "lfqa/lightfield.hpp"

namespace lfqa {

struct LbpRung {
  int radius = 1;      // R >= 1
  int neighbors = 8;   // P >= 3
  double threshold = 0.5;  // T >= 0, applied as theta(z) = 1 iff z >= T
};

struct LbpConfig {
  std::vector<LbpRung> ladder;  // default set by make_default_ladder

  static LbpConfig standard();     // P = 8R: {(1,8),(2,16),(3,24)}, T = R/2
  static LbpConfig text_variant(); // P = 3R: {(1,3),(2,6),(3,9)},  T = R/2
};

void validate(const LbpConfig& cfg);

/// Per-pixel riu2 labels in {0, ..., P+1}. Only pixels with a fully in-bounds
/// neighborhood are produced: the map covers the interior with a margin of R
/// on every side. Requires EPI dims >= 2R+1 (TooSmall otherwise).
struct LbpLabelMap {
  int width = 0;   // epi width  - 2R
  int height = 0;  // epi height - 2R
  int neighbors = 0;
  std::vector<uint8_t> labels;

  uint8_t at(int x, int y) const { return labels[static_cast<size_t>(y) * width + x]; }
};

LbpLabelMap lbp_riu2(const EpiSlice& epi, const LbpRung& rung);

/// riu2 mapping of a raw P-bit sign pattern: the ones count when the circular
/// transition count is <= 2, else P+1. Bit p of `pattern` is theta for
/// neighbor p. Exposed so the exhaustive pattern tests can drive it directly.
int riu2_label(uint64_t pattern, int neighbors);

/// Normalized label histogram of one map (length P+2).
std::vector<double> label_histogram(const LbpLabelMap& map);

struct WlbpHistogram {
  std::vector<double> bins;     // P+2 entries, unit sum
  bool all_weights_zero = false;  // fell back to the unweighted mean
};

/// Entropy-weighted aggregation over the per-EPI label histograms: each EPI
/// contributes its histogram weighted by the histogram's Shannon entropy in
/// bits; EPIs whose labels collapse into a single bin weigh nothing. When
/// every weight vanishes the plain mean is returned and flagged.
WlbpHistogram wlbp_aggregate(const std::vector<LbpLabelMap>& maps);

struct WlbpFeatures {
  std::vector<double> values;
  bool vertical_present = false;  // vertical rungs concatenate first
  bool horizontal_present = false;
  std::vector<int> rung_sizes;  // P+2 per rung, per present orientation
};

/// Full descriptor: for each present orientation (vertical first) and each
/// ladder rung, the aggregated histogram; all histograms concatenated.
WlbpFeatures wlbp_features(const LightField& lf, const LbpConfig& cfg);

namespace reference {

/// Serial label map computing every neighbor coordinate from scratch.
LbpLabelMap lbp_riu2(const EpiSlice& epi, const LbpRung& rung);

}  // namespace reference

}  // namespace lfqa
