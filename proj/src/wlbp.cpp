#include "lfqa/wlbp.hpp"

#include <bit>
#include <cmath>

#include "lfqa/parallel.hpp"

namespace lfqa {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct NeighborOffset {
  double dx;
  double dy;
};

std::vector<NeighborOffset> neighbor_offsets(const LbpRung& rung) {
  std::vector<NeighborOffset> off(static_cast<size_t>(rung.neighbors));
  for (int p = 0; p < rung.neighbors; ++p) {
    double a = kTwoPi * p / rung.neighbors;
    off[p] = {rung.radius * std::cos(a), -rung.radius * std::sin(a)};
  }
  return off;
}

inline double bilinear(const Image& img, double fx, double fy) {
  int x0 = static_cast<int>(std::floor(fx));
  int y0 = static_cast<int>(std::floor(fy));
  double wx = fx - x0;
  double wy = fy - y0;
  int x1 = x0 + 1 < img.width ? x0 + 1 : img.width - 1;
  int y1 = y0 + 1 < img.height ? y0 + 1 : img.height - 1;
  double top = (1.0 - wx) * img.at(x0, y0) + wx * img.at(x1, y0);
  double bot = (1.0 - wx) * img.at(x0, y1) + wx * img.at(x1, y1);
  return (1.0 - wy) * top + wy * bot;
}

void check_rung(const LbpRung& rung) {
  // P >= 3 admits the selectable P = 3R ladder variant.
  if (rung.radius < 1 || rung.neighbors < 3 || rung.neighbors > 62 || rung.threshold < 0.0)
    fail(Err::ConfigError, "bad LBP rung (need R >= 1, 3 <= P <= 62, T >= 0)");
}

uint64_t sign_pattern(const Image& img, const std::vector<NeighborOffset>& off, double center,
                      double threshold, int x, int y) {
  uint64_t bits = 0;
  for (size_t p = 0; p < off.size(); ++p) {
    double v = bilinear(img, x + off[p].dx, y + off[p].dy);
    if (v - center >= threshold) bits |= uint64_t{1} << p;
  }
  return bits;
}

LbpLabelMap compute_labels(const EpiSlice& epi, const LbpRung& rung, bool parallel) {
  check_rung(rung);
  const Image& img = epi.pixels;
  const int r = rung.radius;
  if (img.width < 2 * r + 1 || img.height < 2 * r + 1)
    fail(Err::TooSmall, "EPI smaller than the LBP neighborhood");

  const std::vector<NeighborOffset> off = neighbor_offsets(rung);
  LbpLabelMap map;
  map.width = img.width - 2 * r;
  map.height = img.height - 2 * r;
  map.neighbors = rung.neighbors;
  map.labels.resize(static_cast<size_t>(map.width) * map.height);

#pragma omp parallel for schedule(static) if (parallel)
  for (int y = 0; y < map.height; ++y) {
    for (int x = 0; x < map.width; ++x) {
      double center = img.at(x + r, y + r);
      uint64_t bits = sign_pattern(img, off, center, rung.threshold, x + r, y + r);
      map.labels[static_cast<size_t>(y) * map.width + x] =
          static_cast<uint8_t>(riu2_label(bits, rung.neighbors));
    }
  }
  return map;
}

}  // namespace

int riu2_label(uint64_t pattern, int neighbors) {
  const uint64_t mask = neighbors == 64 ? ~uint64_t{0} : (uint64_t{1} << neighbors) - 1;
  pattern &= mask;
  // Circular transition count: XOR against a 1-bit rotation.
  uint64_t rotated = ((pattern >> 1) | (pattern << (neighbors - 1))) & mask;
  int transitions = std::popcount(pattern ^ rotated);
  if (transitions <= 2) return std::popcount(pattern);
  return neighbors + 1;
}

LbpLabelMap lbp_riu2(const EpiSlice& epi, const LbpRung& rung) {
  return compute_labels(epi, rung, true);
}

namespace reference {

LbpLabelMap lbp_riu2(const EpiSlice& epi, const LbpRung& rung) {
  return compute_labels(epi, rung, false);
}

}  // namespace reference

std::vector<double> label_histogram(const LbpLabelMap& map) {
  if (map.labels.empty()) fail(Err::EmptyInput, "empty label map");
  std::vector<double> hist(static_cast<size_t>(map.neighbors) + 2, 0.0);
  for (uint8_t l : map.labels) hist[l] += 1.0;
  for (double& v : hist) v /= static_cast<double>(map.labels.size());
  return hist;
}

namespace {

double entropy_bits(const std::vector<double>& hist) {
  double h = 0.0;
  for (double p : hist)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

}  // namespace

WlbpHistogram wlbp_aggregate(const std::vector<LbpLabelMap>& maps) {
  if (maps.empty()) fail(Err::EmptyInput, "WLBP aggregation needs at least one map");
  const size_t bins = static_cast<size_t>(maps.front().neighbors) + 2;

  WlbpHistogram out;
  out.bins.assign(bins, 0.0);
  double weight_sum = 0.0;
  for (const LbpLabelMap& m : maps) {
    if (static_cast<size_t>(m.neighbors) + 2 != bins)
      fail(Err::SizeMismatch, "mixed P in one aggregation");
    std::vector<double> h = label_histogram(m);
    double w = entropy_bits(h);
    for (size_t b = 0; b < bins; ++b) out.bins[b] += w * h[b];
    weight_sum += w;
  }
  if (weight_sum > 0.0) {
    for (double& v : out.bins) v /= weight_sum;
    return out;
  }
  // Every EPI collapsed into a single label: fall back to the plain mean.
  out.all_weights_zero = true;
  std::fill(out.bins.begin(), out.bins.end(), 0.0);
  for (const LbpLabelMap& m : maps) {
    std::vector<double> h = label_histogram(m);
    for (size_t b = 0; b < bins; ++b) out.bins[b] += h[b];
  }
  for (double& v : out.bins) v /= static_cast<double>(maps.size());
  return out;
}

LbpConfig LbpConfig::standard() {
  LbpConfig cfg;
  cfg.ladder = {{1, 8, 0.5}, {2, 16, 1.0}, {3, 24, 1.5}};
  return cfg;
}

LbpConfig LbpConfig::text_variant() {
  LbpConfig cfg;
  cfg.ladder = {{1, 3, 0.5}, {2, 6, 1.0}, {3, 9, 1.5}};
  return cfg;
}

void validate(const LbpConfig& cfg) {
  if (cfg.ladder.empty()) fail(Err::ConfigError, "LBP ladder is empty");
  for (const LbpRung& r : cfg.ladder) check_rung(r);
}

WlbpFeatures wlbp_features(const LightField& lf, const LbpConfig& cfg) {
  validate(cfg);
  WlbpFeatures out;

  auto run_orientation = [&](EpiOrientation o) {
    std::vector<EpiSlice> epis = extract_epis(lf, o);
    for (const LbpRung& rung : cfg.ladder) {
      std::vector<LbpLabelMap> maps(epis.size());
      parallel_indexed(static_cast<int>(epis.size()),
                       [&](int i) { maps[static_cast<size_t>(i)] = lbp_riu2(epis[i], rung); });
      WlbpHistogram h = wlbp_aggregate(maps);  // fixed EPI order
      out.values.insert(out.values.end(), h.bins.begin(), h.bins.end());
      out.rung_sizes.push_back(static_cast<int>(h.bins.size()));
    }
  };

  if (orientation_usable(lf, EpiOrientation::Vertical)) {
    run_orientation(EpiOrientation::Vertical);
    out.vertical_present = true;
  }
  if (orientation_usable(lf, EpiOrientation::Horizontal)) {
    run_orientation(EpiOrientation::Horizontal);
    out.horizontal_present = true;
  }
  if (!out.vertical_present && !out.horizontal_present)
    fail(Err::NoUsableEpis, "both EPI orientations are degenerate");
  return out;
}

}  // namespace lfqa
