#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "lfqa/errors.hpp"

namespace lfqa {

/// Row-major 2-D buffer of double-precision luminance. Loaded views live in
/// [0, 255]; derived maps (MSCN coefficients, activity, gradients) reuse the
/// same container without the range restriction.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  Image() = default;
  Image(int w, int h, double fill = 0.0)
      : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {}

  double& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
  double at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }

  /// Sample with coordinates clamped to the border (edge replication).
  double at_clamped(int x, int y) const {
    if (x < 0) x = 0;
    if (x >= width) x = width - 1;
    if (y < 0) y = 0;
    if (y >= height) y = height - 1;
    return at(x, y);
  }

  size_t size() const { return data.size(); }
  bool same_size(const Image& o) const { return width == o.width && height == o.height; }

  double mean() const {
    double s = 0.0;
    for (double v : data) s += v;
    return data.empty() ? 0.0 : s / static_cast<double>(data.size());
  }
};

/// BT.601 luma weights.
inline double luma(double r, double g, double b) {
  return 0.299 * r + 0.587 * g + 0.114 * b;
}

/// 2x2 box downsampling with floor on odd dimensions.
Image downsample2(const Image& img);

}  // namespace lfqa
