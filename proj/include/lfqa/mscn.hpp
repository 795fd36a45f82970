#pragma once

#include <vector>

#include "lfqa/image.hpp"

namespace lfqa {

/// The 7x7 circularly symmetric Gaussian weighting window (K = L = 3,
/// standard deviation 7/6 so the support spans three of them), unit sum.
std::vector<double> mscn_window();

/// Mean-subtracted contrast-normalized coefficients:
///   (img - mu) / (sigma + 1)
/// with mu and sigma the Gaussian-weighted local mean and standard deviation,
/// border replication. Requires img >= 7x7 (TooSmall otherwise).
Image mscn(const Image& img);

namespace reference {

/// Direct per-pixel evaluation of the defining sums (deviations taken about
/// the center-pixel mean), serial.
Image mscn(const Image& img);

}  // namespace reference

}  // namespace lfqa
