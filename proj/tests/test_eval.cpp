#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <set>

#include "lfqa/dataset.hpp"
#include "lfqa/metrics.hpp"
#include "lfqa/protocol.hpp"
#include "lfqa/rng.hpp"

using namespace lfqa;
namespace fs = std::filesystem;

namespace {

// Synthetic labeled dataset: features carry the score plus structured noise,
// so the pipeline has honest signal without any image work.
LabeledDataset toy_dataset(size_t n, uint64_t seed, double noise = 0.05) {
  Rng rng(seed);
  LabeledDataset ds;
  ds.layout.names = {"f0", "f1", "f2"};
  for (size_t i = 0; i < n; ++i) {
    DatasetRow r;
    r.item = "item" + std::to_string(i);
    r.scene = "scene" + std::to_string(i % 5);
    r.distortion = (i % 2) ? "A" : "B";
    r.level = static_cast<int>(i % 5);
    double score = 1.0 + 4.0 * rng.next_double();
    r.score = score;
    r.features = {score + rng.normal(0.0, noise), std::sin(score) + rng.normal(0.0, noise),
                  rng.next_double()};
    ds.rows.push_back(std::move(r));
  }
  return ds;
}

}  // namespace

TEST_CASE("rank correlation basics") {
  std::vector<double> a = {1, 2, 3, 4, 5};
  std::vector<double> b = {2, 4, 6, 8, 10};
  std::vector<double> r = {10, 8, 6, 4, 2};
  CHECK(srcc(a, b) == 1.0);
  CHECK(srcc(a, r) == -1.0);
  CHECK(lcc(a, b) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lcc(a, r) == doctest::Approx(-1.0).epsilon(1e-12));

  std::vector<double> x = {1, 2, 3};
  std::vector<double> y = {1, 3, 2};
  CHECK(srcc(x, y) == 0.5);  // 1 - 6*2/(3*8), exactly

  // Ties get average ranks: frozen against the closed-form rank computation.
  std::vector<double> ta = {1, 2, 2, 3};
  std::vector<double> tb = {1, 2, 3, 4};
  CHECK(srcc(ta, tb) == doctest::Approx(3.0 / std::sqrt(10.0)).epsilon(1e-12));

  CHECK(srcc(a, a) == 1.0);
  // Invariance under strictly increasing transforms.
  std::vector<double> g = {0.1, 2.3, 2.4, 7.0, 11.0};
  std::vector<double> g2;
  for (double v : g) g2.push_back(std::exp(v));
  CHECK(srcc(g, b) == srcc(g2, b));

  CHECK_THROWS_AS(srcc(a, x), Error);                            // LengthMismatch
  CHECK_THROWS_AS(lcc(std::vector<double>{1, 1, 1}, x), Error);  // ZeroVariance
}

TEST_CASE("rmse and outlier ratio") {
  std::vector<double> t = {1, 2, 3, 4};
  CHECK(rmse(t, t) == 0.0);
  CHECK(outlier_ratio(t, t) == 0.0);
  std::vector<double> p = {2, 3, 4, 5};
  CHECK(rmse(p, t) == doctest::Approx(1.0).epsilon(1e-12));
  // stddev(t) = sqrt(1.25); only errors beyond 2*that count.
  std::vector<double> q = {1, 2, 3, 4 + 2.0 * std::sqrt(1.25) + 0.01};
  CHECK(outlier_ratio(q, t) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("logistic fit nests the linear fit") {
  Rng rng(3);
  std::vector<double> q(50), s(50);
  for (size_t i = 0; i < q.size(); ++i) q[i] = -2.0 + 4.0 * rng.next_double();

  SUBCASE("identity and affine targets are exact") {
    for (size_t i = 0; i < q.size(); ++i) s[i] = q[i];
    CHECK(logistic_fit(q, s).sse <= 1e-9);
    for (size_t i = 0; i < q.size(); ++i) s[i] = 2.0 * q[i] + 3.0;
    CHECK(logistic_fit(q, s).sse <= 1e-6);
  }

  SUBCASE("recovers a saturating curve generated from the family") {
    std::array<double, 5> truth = {2.0, 1.7, 0.3, 0.1, 2.5};
    double ssq = 0.0;
    for (size_t i = 0; i < q.size(); ++i) {
      s[i] = truth[0] * (0.5 - 1.0 / (1.0 + std::exp(truth[1] * (q[i] - truth[2])))) +
             truth[3] * q[i] + truth[4];
      ssq += s[i] * s[i];
    }
    LogisticFit fit = logistic_fit(q, s);
    CHECK(fit.sse <= 1e-3 * ssq);
    CHECK(fit.remapped.size() == q.size());
  }

  SUBCASE("never worse than the plain linear fit") {
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> qq(30), ss(30);
      for (size_t i = 0; i < qq.size(); ++i) {
        qq[i] = rng.normal(0.0, 2.0);
        ss[i] = rng.normal(1.0, 3.0);
      }
      double mq = 0.0, ms = 0.0;
      for (size_t i = 0; i < qq.size(); ++i) {
        mq += qq[i] / qq.size();
        ms += ss[i] / ss.size();
      }
      double var = 0.0, cov = 0.0;
      for (size_t i = 0; i < qq.size(); ++i) {
        var += (qq[i] - mq) * (qq[i] - mq);
        cov += (qq[i] - mq) * (ss[i] - ms);
      }
      double slope = cov / var;
      double linear_sse = 0.0;
      for (size_t i = 0; i < qq.size(); ++i) {
        double e = ms + slope * (qq[i] - mq) - ss[i];
        linear_sse += e * e;
      }
      CHECK(logistic_fit(qq, ss).sse <= linear_sse + 1e-9);
    }
  }

  SUBCASE("degenerate inputs are rejected") {
    std::vector<double> flat(50, 1.0);
    CHECK_THROWS_AS(logistic_fit(flat, s), Error);
    CHECK_THROWS_AS(logistic_fit(std::vector<double>{1, 2}, std::vector<double>{1, 2}), Error);
  }
}

TEST_CASE("significance matrix") {
  Rng rng(4);
  std::vector<double> strong(1000), weak(1000), weak2(1000);
  for (size_t i = 0; i < strong.size(); ++i) {
    strong[i] = rng.normal(0.9, 0.01);
    weak[i] = rng.normal(0.5, 0.01);
    weak2[i] = rng.normal(0.5, 0.01);
  }
  auto m = significance_matrix({strong, weak, weak2});
  CHECK(m[0][0] == 0);
  CHECK(m[0][1] == 1);
  CHECK(m[1][0] == -1);
  CHECK(m[0][2] == 1);
  CHECK(m[1][2] == 0);  // statistically indistinguishable
  for (size_t i = 0; i < 3; ++i)
    for (size_t j = 0; j < 3; ++j) CHECK(m[i][j] == -m[j][i]);

  CHECK_THROWS_AS(significance_matrix({{0.5}, {0.6, 0.7}}), Error);
}

TEST_CASE("median definition") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
  CHECK_THROWS_AS(median({}), Error);
}

TEST_CASE("features CSV round trip") {
  LabeledDataset ds = toy_dataset(12, 5);
  ds.rows[3].score.reset();  // unlabeled row survives the trip
  fs::path path = fs::temp_directory_path() / "lfqa_eval_roundtrip.csv";
  save_features_csv(path.string(), ds);
  LabeledDataset back = load_features_csv(path.string());
  REQUIRE(back.layout == ds.layout);
  REQUIRE(back.rows.size() == ds.rows.size());
  for (size_t i = 0; i < ds.rows.size(); ++i) {
    CHECK(back.rows[i].item == ds.rows[i].item);
    CHECK(back.rows[i].score.has_value() == ds.rows[i].score.has_value());
    if (ds.rows[i].score) CHECK(*back.rows[i].score == *ds.rows[i].score);
    REQUIRE(back.rows[i].features == ds.rows[i].features);  // 17-digit exactness
  }
}

TEST_CASE("protocol splits") {
  std::vector<std::string> scenes;
  for (int i = 0; i < 40; ++i) scenes.push_back("s" + std::to_string(i % 8));

  SUBCASE("item mode sizes") {
    Rng rng(6);
    std::vector<size_t> train, test;
    protocol_split(scenes, 0.8, SplitUnit::Item, rng, train, test);
    CHECK(train.size() == 32);
    CHECK(test.size() == 8);
  }

  SUBCASE("scene mode never straddles a scene") {
    for (int trial = 0; trial < 50; ++trial) {
      Rng rng = Rng::fork(7, static_cast<uint64_t>(trial));
      std::vector<size_t> train, test;
      protocol_split(scenes, 0.8, SplitUnit::Scene, rng, train, test);
      std::set<std::string> train_scenes, test_scenes;
      for (size_t i : train) train_scenes.insert(scenes[i]);
      for (size_t i : test) test_scenes.insert(scenes[i]);
      for (const auto& s : test_scenes) REQUIRE(!train_scenes.count(s));
      REQUIRE(train.size() + test.size() == scenes.size());
    }
  }
}

TEST_CASE("run_protocol determinism and structure") {
  LabeledDataset ds = toy_dataset(40, 8);
  ProtocolCfg cfg;
  cfg.n_trials = 6;
  cfg.seed = 123;
  cfg.grid.c_grid = {1.0, 16.0};
  cfg.grid.gamma_grid = {0.125, 1.0};
  cfg.grid.folds = 3;

  EvalReport a = run_protocol(ds, cfg);
  EvalReport b = run_protocol(ds, cfg);
  CHECK(report_to_json(a, "") == report_to_json(b, ""));
  CHECK(a.trials.size() == 6);
  CHECK(a.median_srcc > 0.8);  // features carry the score directly

  cfg.n_trials = 1;
  CHECK(run_protocol(ds, cfg).trials.size() == 1);

  LabeledDataset tiny = toy_dataset(3, 9);
  CHECK_THROWS_AS(run_protocol(tiny, cfg), Error);
}

TEST_CASE("polarity handling reports on the original scale") {
  LabeledDataset ds = toy_dataset(40, 10, 0.02);
  ProtocolCfg cfg;
  cfg.n_trials = 4;
  cfg.seed = 5;
  cfg.grid.c_grid = {4.0};
  cfg.grid.gamma_grid = {0.5};
  EvalReport mos = run_protocol(ds, cfg);

  LabeledDataset flipped = ds;
  flipped.polarity = ScorePolarity::LowerBetter;
  for (DatasetRow& r : flipped.rows) r.score = -*r.score;
  EvalReport dmos = run_protocol(flipped, cfg);
  // Same splits, negated targets: ranks mirror exactly. The remapped metrics
  // depend on which local optimum the simplex descent lands in, so they only
  // get a sanity bound.
  CHECK(dmos.median_srcc == doctest::Approx(mos.median_srcc).epsilon(1e-9));
  CHECK(std::fabs(dmos.median_rmse - mos.median_rmse) <= 0.05);
}

TEST_CASE("cross dataset") {
  LabeledDataset ds = toy_dataset(40, 11, 0.02);
  ProtocolCfg cfg;
  cfg.n_trials = 8;
  cfg.seed = 17;
  cfg.grid.c_grid = {1.0, 16.0};
  cfg.grid.gamma_grid = {0.125, 1.0};

  // Resubstitution upper-bounds held-out performance (with slack).
  EvalReport heldout = run_protocol(ds, cfg);
  CrossDatasetResult resub = cross_dataset(ds, ds, {}, cfg);
  CHECK(resub.metrics.srcc >= heldout.median_srcc - 0.05);

  LabeledDataset other = toy_dataset(20, 12, 0.02);
  other.layout.names = {"f0", "f1"};
  for (DatasetRow& r : other.rows) r.features.resize(2);
  CHECK_THROWS_AS(cross_dataset(ds, other, {}, cfg), Error);  // LayoutMismatch

  CHECK_THROWS_AS(cross_dataset(ds, ds, {"no_such_tag"}, cfg), Error);  // InsufficientData

  CrossDatasetResult filtered = cross_dataset(ds, ds, {"A"}, cfg);
  CHECK(filtered.n_test < static_cast<int>(ds.rows.size()));
}
