#include "lfqa/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace lfqa {

std::vector<double> gaussian_kernel_1d(int radius, double sigma) {
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    double w = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
    k[i + radius] = w;
    sum += w;
  }
  for (double& w : k) w /= sum;
  return k;
}

Image blur_replicate(const Image& img, const std::vector<double>& k1d) {
  const int radius = static_cast<int>(k1d.size()) / 2;
  Image tmp(img.width, img.height);
  Image out(img.width, img.height);

  // Taps accumulate deviations from the center sample, so a locally constant
  // window returns its value bit-exactly (the unit-sum kernel makes the two
  // forms equal in exact arithmetic).

  // Horizontal pass.
#pragma omp parallel for schedule(static)
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double center = img.at(x, y);
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        int xx = std::clamp(x + i, 0, img.width - 1);
        acc += k1d[i + radius] * (img.at(xx, y) - center);
      }
      tmp.at(x, y) = center + acc;
    }
  }

  // Vertical pass.
#pragma omp parallel for schedule(static)
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double center = tmp.at(x, y);
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        int yy = std::clamp(y + i, 0, img.height - 1);
        acc += k1d[i + radius] * (tmp.at(x, yy) - center);
      }
      out.at(x, y) = center + acc;
    }
  }
  return out;
}

namespace {

// Kernels as printed, applied by correlation.
constexpr int kSobelX[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
constexpr int kSobelY[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};

inline void sobel_at(const Image& img, int x, int y, double& gx, double& gy) {
  gx = 0.0;
  gy = 0.0;
  for (int ky = -1; ky <= 1; ++ky) {
    for (int kx = -1; kx <= 1; ++kx) {
      double v = img.at_clamped(x + kx, y + ky);
      gx += kSobelX[ky + 1][kx + 1] * v;
      gy += kSobelY[ky + 1][kx + 1] * v;
    }
  }
}

}  // namespace

void sobel_pair(const Image& img, Image& ex, Image& ey) {
  ex = Image(img.width, img.height);
  ey = Image(img.width, img.height);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double gx, gy;
      sobel_at(img, x, y, gx, gy);
      ex.at(x, y) = gx;
      ey.at(x, y) = gy;
    }
  }
}

Image window_variance(const Image& img, int n) {
  const int r = n / 2;
  const double count = static_cast<double>(n) * n;
  Image out(img.width, img.height);

  // Column sums first, then an O(N) horizontal gather per pixel.
#pragma omp parallel for schedule(static)
  for (int y = 0; y < img.height; ++y) {
    std::vector<double> col_s(img.width), col_s2(img.width);
    for (int x = 0; x < img.width; ++x) {
      double s = 0.0, s2 = 0.0;
      for (int k = -r; k <= r; ++k) {
        double v = img.at_clamped(x, y + k);
        s += v;
        s2 += v * v;
      }
      col_s[x] = s;
      col_s2[x] = s2;
    }
    for (int x = 0; x < img.width; ++x) {
      double s = 0.0, s2 = 0.0;
      for (int l = -r; l <= r; ++l) {
        int xx = std::clamp(x + l, 0, img.width - 1);
        s += col_s[xx];
        s2 += col_s2[xx];
      }
      double mean = s / count;
      out.at(x, y) = std::max(s2 / count - mean * mean, 0.0);
    }
  }
  return out;
}

namespace {

constexpr int kBlock = 8;

// Orthonormal DCT-II basis for 8-point rows/columns.
const std::array<std::array<double, kBlock>, kBlock>& dct_basis() {
  static const auto basis = [] {
    std::array<std::array<double, kBlock>, kBlock> b{};
    const double pi = 3.14159265358979323846;
    for (int k = 0; k < kBlock; ++k) {
      double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / kBlock);
      for (int i = 0; i < kBlock; ++i)
        b[k][i] = scale * std::cos(pi * (2 * i + 1) * k / (2.0 * kBlock));
    }
    return b;
  }();
  return basis;
}

}  // namespace

Image block_dct_quantize(const Image& img, double step) {
  const auto& basis = dct_basis();
  Image out(img.width, img.height);
  const int bw = (img.width + kBlock - 1) / kBlock;
  const int bh = (img.height + kBlock - 1) / kBlock;

#pragma omp parallel for schedule(static)
  for (int by = 0; by < bh; ++by) {
    double block[kBlock][kBlock];
    double coef[kBlock][kBlock];
    double tmp[kBlock][kBlock];
    for (int bx = 0; bx < bw; ++bx) {
      for (int y = 0; y < kBlock; ++y)
        for (int x = 0; x < kBlock; ++x)
          block[y][x] = img.at_clamped(bx * kBlock + x, by * kBlock + y);

      // rows then columns
      for (int y = 0; y < kBlock; ++y)
        for (int k = 0; k < kBlock; ++k) {
          double acc = 0.0;
          for (int i = 0; i < kBlock; ++i) acc += basis[k][i] * block[y][i];
          tmp[y][k] = acc;
        }
      for (int k = 0; k < kBlock; ++k)
        for (int x = 0; x < kBlock; ++x) {
          double acc = 0.0;
          for (int i = 0; i < kBlock; ++i) acc += basis[k][i] * tmp[i][x];
          // Deadzone uniform quantizer (codec-style): |c| < step maps to 0.
          coef[k][x] = std::trunc(acc / step) * step;
        }

      // inverse: transpose applications
      for (int y = 0; y < kBlock; ++y)
        for (int x = 0; x < kBlock; ++x) {
          double acc = 0.0;
          for (int k = 0; k < kBlock; ++k) acc += basis[k][y] * coef[k][x];
          tmp[y][x] = acc;
        }
      for (int y = 0; y < kBlock; ++y)
        for (int x = 0; x < kBlock; ++x) {
          double acc = 0.0;
          for (int k = 0; k < kBlock; ++k) acc += basis[k][x] * tmp[y][k];
          int px = bx * kBlock + x;
          int py = by * kBlock + y;
          if (px < img.width && py < img.height)
            out.at(px, py) = std::clamp(acc, 0.0, 255.0);
        }
    }
  }
  return out;
}

namespace reference {

Image blur_replicate(const Image& img, const std::vector<double>& k1d) {
  const int radius = static_cast<int>(k1d.size()) / 2;
  Image out(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double center = img.at(x, y);
      double acc = 0.0;
      for (int ky = -radius; ky <= radius; ++ky)
        for (int kx = -radius; kx <= radius; ++kx)
          acc += k1d[ky + radius] * k1d[kx + radius] * (img.at_clamped(x + kx, y + ky) - center);
      out.at(x, y) = center + acc;
    }
  }
  return out;
}

void sobel_pair(const Image& img, Image& ex, Image& ey) {
  ex = Image(img.width, img.height);
  ey = Image(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double gx, gy;
      sobel_at(img, x, y, gx, gy);
      ex.at(x, y) = gx;
      ey.at(x, y) = gy;
    }
  }
}

Image window_variance(const Image& img, int n) {
  const int r = n / 2;
  const double count = static_cast<double>(n) * n;
  Image out(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double mean = 0.0;
      for (int ky = -r; ky <= r; ++ky)
        for (int kx = -r; kx <= r; ++kx) mean += img.at_clamped(x + kx, y + ky);
      mean /= count;
      double var = 0.0;
      for (int ky = -r; ky <= r; ++ky)
        for (int kx = -r; kx <= r; ++kx) {
          double d = img.at_clamped(x + kx, y + ky) - mean;
          var += d * d;
        }
      out.at(x, y) = var / count;
    }
  }
  return out;
}

}  // namespace reference

}  // namespace lfqa
