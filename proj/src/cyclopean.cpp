#include "lfqa/cyclopean.hpp"

#include <algorithm>
#include <cmath>

#include "lfqa/kernels.hpp"
#include "lfqa/parallel.hpp"

namespace lfqa {

namespace {

// Standard SSIM constants for 8-bit range.
constexpr double kSsimC1 = (0.01 * 255.0) * (0.01 * 255.0);
constexpr double kSsimC2 = (0.03 * 255.0) * (0.03 * 255.0);

// 2-D Gaussian SSIM window, unit sum. sigma = 1.5 as in the standard index.
std::vector<double> ssim_window(int size) {
  std::vector<double> g = gaussian_kernel_1d(size / 2, 1.5);
  std::vector<double> w(static_cast<size_t>(size) * size);
  double total = 0.0;
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      w[static_cast<size_t>(y) * size + x] = g[y] * g[x];
      total += g[y] * g[x];
    }
  for (double& v : w) v /= total;
  return w;
}

struct WindowStats {
  double mean = 0.0;
  double var = 0.0;
};

// Weighted moments of the window centered at (cx, cy), edge-clamped samples.
inline WindowStats window_stats(const Image& img, const std::vector<double>& w, int half, int cx,
                                int cy) {
  const int size = 2 * half + 1;
  double m = 0.0, m2 = 0.0;
  for (int ky = -half; ky <= half; ++ky) {
    for (int kx = -half; kx <= half; ++kx) {
      double wv = w[static_cast<size_t>(ky + half) * size + (kx + half)];
      double v = img.at_clamped(cx + kx, cy + ky);
      m += wv * v;
      m2 += wv * v * v;
    }
  }
  return {m, m2 - m * m};
}

// Weighted cross moment between the two windows.
inline double window_cross(const Image& a, const Image& b, const std::vector<double>& w, int half,
                           int ax, int ay, int bx, int by) {
  const int size = 2 * half + 1;
  double m = 0.0;
  for (int ky = -half; ky <= half; ++ky) {
    for (int kx = -half; kx <= half; ++kx) {
      double wv = w[static_cast<size_t>(ky + half) * size + (kx + half)];
      m += wv * a.at_clamped(ax + kx, ay + ky) * b.at_clamped(bx + kx, by + ky);
    }
  }
  return m;
}

inline double ssim_value(const WindowStats& l, const WindowStats& r, double cross) {
  double cov = cross - l.mean * r.mean;
  double num = (2.0 * l.mean * r.mean + kSsimC1) * (2.0 * cov + kSsimC2);
  double den = (l.mean * l.mean + r.mean * r.mean + kSsimC1) * (l.var + r.var + kSsimC2);
  return num / den;
}

// Shift preference order: 0, -1, +1, -2, +2, ... implements the tie-break
// toward smaller |d|, then toward negative d.
std::vector<int> shift_order(int d_max) {
  std::vector<int> order;
  order.push_back(0);
  for (int m = 1; m <= d_max; ++m) {
    order.push_back(-m);
    order.push_back(m);
  }
  return order;
}

void check_disparity_inputs(const Image& left, const Image& right, const DisparityCfg& cfg) {
  if (!left.same_size(right)) fail(Err::SizeMismatch, "disparity inputs differ in size");
  if (cfg.d_max < 0) fail(Err::ConfigError, "d_max must be >= 0");
  if (cfg.window < 3 || cfg.window % 2 == 0) fail(Err::ConfigError, "SSIM window must be odd >= 3");
}

inline int best_shift(const Image& left, const Image& right, const std::vector<double>& w,
                      int half, const std::vector<int>& order, int x, int y) {
  WindowStats ls = window_stats(left, w, half, x, y);
  double best_score = -2.0;
  int best_d = 0;
  for (int d : order) {
    WindowStats rs = window_stats(right, w, half, x + d, y);
    double cross = window_cross(left, right, w, half, x, y, x + d, y);
    double score = ssim_value(ls, rs, cross);
    if (score > best_score) {
      best_score = score;
      best_d = d;
    }
  }
  return best_d;
}

}  // namespace

DisparityMap estimate_disparity(const Image& left, const Image& right, const DisparityCfg& cfg) {
  check_disparity_inputs(left, right, cfg);
  const int half = cfg.window / 2;
  const std::vector<double> w = ssim_window(cfg.window);
  const std::vector<int> order = shift_order(cfg.d_max);

  DisparityMap map(left.width, left.height);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < left.height; ++y)
    for (int x = 0; x < left.width; ++x)
      map.at(x, y) = best_shift(left, right, w, half, order, x, y);
  return map;
}

namespace reference {

DisparityMap estimate_disparity(const Image& left, const Image& right, const DisparityCfg& cfg) {
  check_disparity_inputs(left, right, cfg);
  const int half = cfg.window / 2;
  const std::vector<double> w = ssim_window(cfg.window);

  DisparityMap map(left.width, left.height);
  for (int y = 0; y < left.height; ++y) {
    for (int x = 0; x < left.width; ++x) {
      double best_score = -2.0;
      int best_d = 0;
      // Same preference order, everything recomputed per shift.
      for (int step = 0; step <= 2 * cfg.d_max; ++step) {
        int m = (step + 1) / 2;
        int d = (step % 2 == 1) ? -m : m;
        WindowStats ls = window_stats(left, w, half, x, y);
        WindowStats rs = window_stats(right, w, half, x + d, y);
        double cross = window_cross(left, right, w, half, x, y, x + d, y);
        double score = ssim_value(ls, rs, cross);
        if (score > best_score) {
          best_score = score;
          best_d = d;
        }
      }
      map.at(x, y) = best_d;
    }
  }
  return map;
}

}  // namespace reference

Image spatial_activity(const Image& img, const ActivityCfg& cfg) {
  if (cfg.n < 3 || cfg.n % 2 == 0) fail(Err::ConfigError, "activity N must be odd >= 3");
  Image var = window_variance(img, cfg.n);
  Image out(img.width, img.height);
  const double inv_log2 = 1.0 / std::log(2.0);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      double v = var.at(x, y);
      out.at(x, y) = std::log(v * v + cfg.a2) * inv_log2;
    }
  return out;
}

CyclopeanResult synthesize_cyclopean_full(const Image& left, const Image& right,
                                          const DisparityMap& d, const ActivityCfg& cfg) {
  if (!left.same_size(right) || left.width != d.width || left.height != d.height)
    fail(Err::SizeMismatch, "cyclopean inputs differ in size");

  Image act_left = spatial_activity(left, cfg);
  Image act_right = spatial_activity(right, cfg);

  CyclopeanResult res;
  res.image = Image(left.width, left.height);
  res.weight_left = Image(left.width, left.height);
  res.weight_right = Image(left.width, left.height);

#pragma omp parallel for schedule(static)
  for (int y = 0; y < left.height; ++y) {
    for (int x = 0; x < left.width; ++x) {
      int xs = std::clamp(x + d.at(x, y), 0, left.width - 1);
      double el = act_left.at(x, y);
      double er = act_right.at(xs, y);
      double den = el + er + cfg.a1;
      double wl = (el + cfg.a1) / den;
      double wr = (er + cfg.a1) / den;
      res.weight_left.at(x, y) = wl;
      res.weight_right.at(x, y) = wr;
      res.image.at(x, y) = wl * left.at(x, y) + wr * right.at(xs, y);
    }
  }
  return res;
}

Image synthesize_cyclopean(const Image& left, const Image& right, const DisparityMap& d,
                           const ActivityCfg& cfg) {
  return synthesize_cyclopean_full(left, right, d, cfg).image;
}

CyclopeanArray build_cyclopean_array(const LightField& lf, const DisparityCfg& dcfg,
                                     const ActivityCfg& acfg) {
  if (lf.num_u < 2) fail(Err::NeedsTwoViews, "cyclopean synthesis needs U >= 2");
  CyclopeanArray arr;
  arr.num_pairs_u = lf.num_u - 1;
  arr.num_v = lf.num_v;
  arr.images.resize(static_cast<size_t>(arr.num_pairs_u) * arr.num_v);
  arr.pairs.resize(arr.images.size());

  // Pairs in ascending (v, u); each slot is independent.
  parallel_indexed(arr.num_pairs_u * arr.num_v, [&](int idx) {
    int v = idx / arr.num_pairs_u;
    int u = idx % arr.num_pairs_u;
    const Image& left = lf.view(u, v);
    const Image& right = lf.view(u + 1, v);
    DisparityMap d = estimate_disparity(left, right, dcfg);
    arr.images[static_cast<size_t>(idx)] = synthesize_cyclopean(left, right, d, acfg);
    arr.pairs[static_cast<size_t>(idx)] = {u, v};
  });
  return arr;
}

}  // namespace lfqa
