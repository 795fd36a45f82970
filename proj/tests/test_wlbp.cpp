#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lfqa/rng.hpp"
#include "lfqa/wlbp.hpp"
#include "oracles.hpp"

using namespace lfqa;

namespace {

EpiSlice noise_epi(int angular, int spatial, uint64_t seed) {
  Rng rng(seed);
  EpiSlice e;
  e.pixels = Image(spatial, angular);
  for (double& v : e.pixels.data) v = std::floor(256.0 * rng.next_double());
  return e;
}

LbpLabelMap map_from_labels(std::vector<uint8_t> labels, int neighbors) {
  LbpLabelMap m;
  m.width = static_cast<int>(labels.size());
  m.height = 1;
  m.neighbors = neighbors;
  m.labels = std::move(labels);
  return m;
}

double entropy_bits(const std::vector<double>& h) {
  double e = 0.0;
  for (double p : h)
    if (p > 0.0) e -= p * std::log2(p);
  return e;
}

}  // namespace

TEST_CASE("riu2 label definitional cases (P=8)") {
  CHECK(riu2_label(0b11111111, 8) == 8);
  CHECK(riu2_label(0b00110000, 8) == 2);
  CHECK(riu2_label(0b01010101, 8) == 9);  // psi = 8 -> P+1
  CHECK(riu2_label(0b00000000, 8) == 0);
  CHECK(riu2_label(0b00000001, 8) == 1);
}

TEST_CASE("riu2 equals the brute-force oracle for all 256 patterns") {
  for (uint64_t pattern = 0; pattern < 256; ++pattern)
    REQUIRE(riu2_label(pattern, 8) == oracles::riu2_brute_force(pattern, 8));
}

TEST_CASE("riu2 is rotation invariant") {
  // Exhaustive for P=8, sampled for P=16 and 24.
  for (uint64_t pattern = 0; pattern < 256; ++pattern) {
    int base = riu2_label(pattern, 8);
    for (int k = 1; k < 8; ++k) {
      uint64_t rot = ((pattern >> k) | (pattern << (8 - k))) & 0xff;
      REQUIRE(riu2_label(rot, 8) == base);
    }
  }
  Rng rng(5);
  for (int p : {16, 24}) {
    const uint64_t mask = (uint64_t{1} << p) - 1;
    for (int trial = 0; trial < 2000; ++trial) {
      uint64_t pattern = rng.next_u64() & mask;
      int base = riu2_label(pattern, p);
      int k = 1 + static_cast<int>(rng.next_u64() % (p - 1));
      uint64_t rot = ((pattern >> k) | (pattern << (p - k))) & mask;
      REQUIRE(riu2_label(rot, p) == base);
    }
  }
}

TEST_CASE("label maps: constant EPI and interior margin") {
  EpiSlice flat;
  flat.pixels = Image(20, 9, 55.0);
  LbpLabelMap m = lbp_riu2(flat, {1, 8, 0.5});
  CHECK(m.width == 18);
  CHECK(m.height == 7);
  for (uint8_t l : m.labels) CHECK(l == 0);  // every theta = 0, psi = 0

  CHECK_THROWS_AS(lbp_riu2(noise_epi(4, 20, 1), {2, 16, 1.0}), Error);  // needs 5 rows
}

TEST_CASE("label maps match the serial reference") {
  for (auto rung : {LbpRung{1, 8, 0.5}, LbpRung{2, 16, 1.0}, LbpRung{3, 24, 1.5}}) {
    EpiSlice e = noise_epi(9, 48, 77 + rung.radius);
    LbpLabelMap a = lbp_riu2(e, rung);
    LbpLabelMap b = reference::lbp_riu2(e, rung);
    REQUIRE(a.labels == b.labels);
  }
}

TEST_CASE("wlbp aggregation weighting") {
  // Identical maps with positive entropy reproduce the common histogram.
  LbpLabelMap a = map_from_labels({0, 0, 1, 1, 2, 2, 3, 3}, 8);
  WlbpHistogram same = wlbp_aggregate({a, a, a});
  auto ha = label_histogram(a);
  for (size_t i = 0; i < ha.size(); ++i) CHECK(same.bins[i] == doctest::Approx(ha[i]));

  // A single-bin map has entropy 0 and contributes nothing.
  LbpLabelMap flat = map_from_labels({4, 4, 4, 4}, 8);
  WlbpHistogram mixed = wlbp_aggregate({a, flat});
  for (size_t i = 0; i < ha.size(); ++i) CHECK(mixed.bins[i] == doctest::Approx(ha[i]));
  CHECK(!mixed.all_weights_zero);

  // Weighted mean with entropies computed from the histograms themselves.
  LbpLabelMap b = map_from_labels({0, 0, 0, 0, 0, 0, 1, 9}, 8);
  auto hb = label_histogram(b);
  double wa = entropy_bits(ha), wb = entropy_bits(hb);
  WlbpHistogram w = wlbp_aggregate({a, b});
  double sum = 0.0;
  for (size_t i = 0; i < ha.size(); ++i) {
    CHECK(w.bins[i] == doctest::Approx((wa * ha[i] + wb * hb[i]) / (wa + wb)).epsilon(1e-12));
    sum += w.bins[i];
  }
  CHECK(std::fabs(sum - 1.0) <= 1e-9);

  // All-zero weights fall back to the plain mean and get flagged.
  LbpLabelMap flat2 = map_from_labels({7, 7}, 8);
  WlbpHistogram fz = wlbp_aggregate({flat, flat2});
  CHECK(fz.all_weights_zero);
  CHECK(fz.bins[4] == doctest::Approx(0.5));
  CHECK(fz.bins[7] == doctest::Approx(0.5));

  CHECK_THROWS_AS(wlbp_aggregate({}), Error);
}

TEST_CASE("wlbp feature lengths") {
  auto make_lf = [](int u, int v, uint64_t seed) {
    std::vector<Image> views;
    Rng rng(seed);
    for (int i = 0; i < u * v; ++i) {
      Image im(24, 20);
      for (double& x : im.data) x = std::floor(256.0 * rng.next_double());
      views.push_back(std::move(im));
    }
    return make_lightfield(u, v, views);
  };

  LbpConfig single;
  single.ladder = {{1, 8, 0.5}};
  LightField row = make_lf(7, 1, 800);
  WlbpFeatures fr = wlbp_features(row, single);
  CHECK(fr.values.size() == 10);  // horizontal only
  CHECK(!fr.vertical_present);

  LightField full = make_lf(7, 7, 801);
  WlbpFeatures ff = wlbp_features(full, LbpConfig::standard());
  CHECK(ff.values.size() == 108);  // (10 + 18 + 26) x 2

  WlbpFeatures f1 = wlbp_features(full, single);
  CHECK(f1.values.size() == 20);

  // A rung whose neighborhood does not fit the angular extent propagates
  // TooSmall; the caller is expected to shrink the ladder instead.
  LightField small_grid = make_lf(5, 5, 802);
  try {
    wlbp_features(small_grid, LbpConfig::standard());  // R = 3 needs 7 rows
    FAIL("expected TooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == Err::TooSmall);
  }

  // Each rung histogram is non-negative with unit mass.
  size_t off = 0;
  for (int size : ff.rung_sizes) {
    double sum = 0.0;
    for (int i = 0; i < size; ++i) {
      REQUIRE(ff.values[off + i] >= 0.0);
      sum += ff.values[off + i];
    }
    REQUIRE(std::fabs(sum - 1.0) <= 1e-9);
    off += static_cast<size_t>(size);
  }
}

TEST_CASE("ladder validation") {
  LbpConfig bad;
  bad.ladder = {{0, 8, 0.5}};
  CHECK_THROWS_AS(validate(bad), Error);
  bad.ladder = {{1, 2, 0.5}};
  CHECK_THROWS_AS(validate(bad), Error);
  bad.ladder = {{1, 8, -0.5}};
  CHECK_THROWS_AS(validate(bad), Error);
  CHECK_NOTHROW(validate(LbpConfig::standard()));
  CHECK_NOTHROW(validate(LbpConfig::text_variant()));  // P = 3R keeps P >= 3
}
