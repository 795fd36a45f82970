#include "lfqa/mscn.hpp"

#include <algorithm>
#include <cmath>

#include "lfqa/kernels.hpp"

namespace lfqa {

namespace {

constexpr int kHalf = 3;            // K = L = 3
constexpr double kSigma = 7.0 / 6.0;  // support spans 3 standard deviations

const std::vector<double>& window_1d() {
  static const std::vector<double> k = gaussian_kernel_1d(kHalf, kSigma);
  return k;
}

}  // namespace

std::vector<double> mscn_window() {
  const auto& g = window_1d();
  const int size = 2 * kHalf + 1;
  std::vector<double> w(static_cast<size_t>(size) * size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) w[static_cast<size_t>(y) * size + x] = g[y] * g[x];
  return w;
}

Image mscn(const Image& img) {
  if (img.width < 7 || img.height < 7) fail(Err::TooSmall, "MSCN needs at least 7x7 input");
  const auto& k = window_1d();

  Image mu = blur_replicate(img, k);
  Image sq(img.width, img.height);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) sq.at(x, y) = img.at(x, y) * img.at(x, y);
  Image m2 = blur_replicate(sq, k);

  Image out(img.width, img.height);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      double m = mu.at(x, y);
      double sigma = std::sqrt(std::max(m2.at(x, y) - m * m, 0.0));
      out.at(x, y) = (img.at(x, y) - m) / (sigma + 1.0);
    }
  return out;
}

namespace reference {

Image mscn(const Image& img) {
  if (img.width < 7 || img.height < 7) fail(Err::TooSmall, "MSCN needs at least 7x7 input");
  const auto& g = window_1d();
  Image out(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double center = img.at(x, y);
      double m = 0.0;
      for (int ky = -kHalf; ky <= kHalf; ++ky)
        for (int kx = -kHalf; kx <= kHalf; ++kx)
          m += g[ky + kHalf] * g[kx + kHalf] * (img.at_clamped(x + kx, y + ky) - center);
      m += center;
      double var = 0.0;
      for (int ky = -kHalf; ky <= kHalf; ++ky)
        for (int kx = -kHalf; kx <= kHalf; ++kx) {
          double d = img.at_clamped(x + kx, y + ky) - m;
          var += g[ky + kHalf] * g[kx + kHalf] * d * d;
        }
      out.at(x, y) = (img.at(x, y) - m) / (std::sqrt(var) + 1.0);
    }
  }
  return out;
}

}  // namespace reference

}  // namespace lfqa
