#pragma once

#include <vector>

#include "lfqa/image.hpp"
#include "lfqa/lightfield.hpp"

namespace lfqa {

/// Signed integer horizontal offsets, |d| <= d_max.
struct DisparityMap {
  int width = 0;
  int height = 0;
  std::vector<int> data;

  DisparityMap() = default;
  DisparityMap(int w, int h) : width(w), height(h), data(static_cast<size_t>(w) * h, 0) {}

  int& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
  int at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
};

struct DisparityCfg {
  int d_max = 4;    // plenoptic baselines are small
  int window = 11;  // Gaussian-weighted SSIM window
};

/// Per-pixel integer disparity search: d maximizing the SSIM index between
/// the window around (s,t) in `left` and around (s+d,t) in `right`.
/// Out-of-bounds window samples clamp to the edge; ties break toward smaller
/// |d|, then toward negative d. OpenMP-parallel across rows.
DisparityMap estimate_disparity(const Image& left, const Image& right, const DisparityCfg& cfg);

struct ActivityCfg {
  int n = 5;        // neighborhood size for the variance
  double a1 = 1e-3; // weight-competition stabilizer
  double a2 = 1.0;  // keeps the activity non-negative
};

/// Spatial activity map: log2(variance^2 + A2) of the N x N neighborhood.
Image spatial_activity(const Image& img, const ActivityCfg& cfg);

struct CyclopeanResult {
  Image image;
  Image weight_left;
  Image weight_right;
};

/// Activity-weighted fusion of a disparity-compensated view pair:
///   C(s,t) = W_l(s,t) * left(s,t) + W_r(s,t) * right(s+d,t)
/// with W_l = (e_l + A1) / (e_l + e_r + A1) and symmetrically for W_r,
/// where e_* are spatial activities (right sampled at the shifted position,
/// clamped at the borders).
CyclopeanResult synthesize_cyclopean_full(const Image& left, const Image& right,
                                          const DisparityMap& d, const ActivityCfg& cfg);

Image synthesize_cyclopean(const Image& left, const Image& right, const DisparityMap& d,
                           const ActivityCfg& cfg);

/// The (U-1) x V sub-cyclopean images from all u-adjacent view pairs,
/// ordered by ascending (v, u).
struct CyclopeanArray {
  int num_pairs_u = 0;  // U - 1
  int num_v = 0;        // V
  std::vector<Image> images;              // indexed v * (U-1) + u
  std::vector<std::pair<int, int>> pairs; // source (u, v) of the left view

  const Image& at(int u, int v) const { return images[static_cast<size_t>(v) * num_pairs_u + u]; }
};

CyclopeanArray build_cyclopean_array(const LightField& lf, const DisparityCfg& dcfg,
                                     const ActivityCfg& acfg);

namespace reference {

/// Naive per-pixel window recomputation, serial; bit-compatible with the
/// production path (same accumulation order per output value).
DisparityMap estimate_disparity(const Image& left, const Image& right, const DisparityCfg& cfg);

}  // namespace reference

}  // namespace lfqa
