#pragma once

#include <vector>

#include "lfqa/image.hpp"

namespace lfqa {

/// Symmetric 1-D Gaussian tap set, normalized to unit sum.
std::vector<double> gaussian_kernel_1d(int radius, double sigma);

/// Separable correlation with an odd normalized kernel, border replication.
/// OpenMP-parallel across rows/columns.
Image blur_replicate(const Image& img, const std::vector<double>& k1d);

/// Sobel responses by correlation with the printed kernels (no flip),
/// border replication. ex/ey keep the input dimensions.
void sobel_pair(const Image& img, Image& ex, Image& ey);

/// Per-pixel population variance of the N x N clamped neighborhood (N odd).
Image window_variance(const Image& img, int n);

/// 8x8 orthonormal DCT-II block transform, uniform quantization with the
/// given step, inverse transform, clamp to [0, 255]. Partial border blocks
/// are handled by edge extension.
Image block_dct_quantize(const Image& img, double step);

namespace reference {

/// Serial direct 2-D window implementations used to validate the parallel
/// kernels and as the baseline side of the benchmark tool.
Image blur_replicate(const Image& img, const std::vector<double>& k1d);
void sobel_pair(const Image& img, Image& ex, Image& ey);
Image window_variance(const Image& img, int n);

}  // namespace reference

}  // namespace lfqa
