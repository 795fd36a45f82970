#include "lfqa/gdd.hpp"

#include <cmath>

#include "lfqa/kernels.hpp"
#include "lfqa/parallel.hpp"

namespace lfqa {

namespace {

constexpr double kRadToDeg = 57.295779513082320876798154814105;

inline double direction_from(double gx, double gy) {
  if (gx == 0.0 && gy == 0.0) return 0.0;  // flat regions count toward 0 deg
  double deg = std::atan2(-gy, gx) * kRadToDeg;
  if (deg >= 180.0) deg = -180.0;
  return deg;
}

double entropy_bits(const std::vector<double>& hist) {
  double h = 0.0;
  for (double p : hist)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

std::vector<double> accumulate_histogram(const Image& dir_map, int bins) {
  std::vector<double> hist(static_cast<size_t>(bins), 0.0);
  const double scale = bins / 360.0;
  for (double deg : dir_map.data) {
    int b = static_cast<int>(std::floor((deg + 180.0) * scale));
    if (b < 0) b = 0;
    if (b >= bins) b = bins - 1;
    hist[static_cast<size_t>(b)] += 1.0;
  }
  return hist;
}

void normalize(std::vector<double>& hist, double total) {
  if (total > 0.0)
    for (double& v : hist) v /= total;
}

}  // namespace

Image gradient_direction_map(const EpiSlice& epi) {
  if (epi.pixels.width < 3 || epi.pixels.height < 3)
    fail(Err::TooSmall, "gradient direction map needs a 3x3 EPI");
  Image ex, ey;
  sobel_pair(epi.pixels, ex, ey);
  Image dir(ex.width, ex.height);
  for (size_t i = 0; i < dir.data.size(); ++i)
    dir.data[i] = direction_from(ex.data[i], ey.data[i]);
  return dir;
}

std::vector<double> direction_histogram(const Image& dir_map, int bins) {
  std::vector<double> hist = accumulate_histogram(dir_map, bins);
  normalize(hist, static_cast<double>(dir_map.data.size()));
  return hist;
}

GddStats gdd_stats(const Image& dir_map, int bins) {
  if (dir_map.data.empty()) fail(Err::EmptyInput, "empty direction map");
  GddStats s;
  const double n = static_cast<double>(dir_map.data.size());
  double sum = 0.0;
  for (double v : dir_map.data) sum += v;
  s.mean = sum / n;

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : dir_map.data) {
    double d = v - s.mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (m2 > 0.0) {
    double sd = std::sqrt(m2);
    s.skewness = m3 / (sd * sd * sd);
    s.kurtosis = m4 / (m2 * m2);
  }  // zero-variance maps keep the 0 convention

  s.entropy = entropy_bits(direction_histogram(dir_map, bins));
  return s;
}

namespace {

// Per-orientation stat averages in fixed EPI enumeration order.
bool orientation_stats(const LightField& lf, EpiOrientation o, int bins, GddStats& out) {
  if (!orientation_usable(lf, o)) return false;
  std::vector<EpiSlice> epis = extract_epis(lf, o);
  std::vector<GddStats> per_epi(epis.size());
  parallel_indexed(static_cast<int>(epis.size()), [&](int i) {
    per_epi[static_cast<size_t>(i)] = gdd_stats(gradient_direction_map(epis[i]), bins);
  });

  GddStats avg;
  for (const GddStats& s : per_epi) {
    avg.mean += s.mean;
    avg.entropy += s.entropy;
    avg.skewness += s.skewness;
    avg.kurtosis += s.kurtosis;
  }
  const double n = static_cast<double>(per_epi.size());
  avg.mean /= n;
  avg.entropy /= n;
  avg.skewness /= n;
  avg.kurtosis /= n;
  out = avg;
  return true;
}

}  // namespace

GddFeatures gdd_features(const LightField& lf, const GddCfg& cfg) {
  if (cfg.bins < 2) fail(Err::ConfigError, "direction histogram needs >= 2 bins");
  GddFeatures f;
  GddStats s;
  if (orientation_stats(lf, EpiOrientation::Vertical, cfg.bins, s)) {
    f.vertical_present = true;
    f.values.insert(f.values.end(), {s.mean, s.entropy, s.skewness, s.kurtosis});
  }
  if (orientation_stats(lf, EpiOrientation::Horizontal, cfg.bins, s)) {
    f.horizontal_present = true;
    f.values.insert(f.values.end(), {s.mean, s.entropy, s.skewness, s.kurtosis});
  }
  if (!f.vertical_present && !f.horizontal_present)
    fail(Err::NoUsableEpis, "both EPI orientations are degenerate");
  return f;
}

std::vector<double> gdd_orientation_histogram(const LightField& lf, EpiOrientation orientation,
                                              int bins) {
  std::vector<EpiSlice> epis = extract_epis(lf, orientation);
  std::vector<std::vector<double>> partial(epis.size());
  parallel_indexed(static_cast<int>(epis.size()), [&](int i) {
    partial[static_cast<size_t>(i)] = accumulate_histogram(gradient_direction_map(epis[i]), bins);
  });

  std::vector<double> hist(static_cast<size_t>(bins), 0.0);
  double total_mass = 0.0;
  for (const auto& h : partial)
    for (size_t b = 0; b < h.size(); ++b) {
      hist[b] += h[b];
      total_mass += h[b];
    }
  normalize(hist, total_mass);
  return hist;
}

}  // namespace lfqa
