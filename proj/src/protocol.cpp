#include "lfqa/protocol.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include <json.hpp>

#include "lfqa/metrics.hpp"
#include "lfqa/rng.hpp"

namespace lfqa {

double median(std::vector<double> v) {
  if (v.empty()) fail(Err::EmptyInput, "median of nothing");
  std::sort(v.begin(), v.end());
  size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

namespace {

struct Prepared {
  std::vector<std::vector<double>> rows;
  std::vector<double> scores;          // original scale
  std::vector<double> train_targets;   // negated for LowerBetter sets
  std::vector<std::string> scenes;
  double polarity_sign = 1.0;
};

Prepared prepare(const LabeledDataset& ds) {
  Prepared p;
  p.polarity_sign = ds.polarity == ScorePolarity::LowerBetter ? -1.0 : 1.0;
  const size_t dim = ds.layout.dim();
  for (const DatasetRow& r : ds.rows) {
    if (!r.score) fail(Err::InsufficientData, r.item + ": missing subjective score");
    if (r.features.size() != dim) fail(Err::LayoutMismatch, r.item + ": feature length");
    p.rows.push_back(r.features);
    p.scores.push_back(*r.score);
    p.train_targets.push_back(*r.score * p.polarity_sign);
    p.scenes.push_back(r.scene);
  }
  return p;
}

}  // namespace

void protocol_split(const std::vector<std::string>& scenes, double train_frac, SplitUnit unit,
                    Rng& rng, std::vector<size_t>& train, std::vector<size_t>& test) {
  const size_t n = scenes.size();
  size_t target = static_cast<size_t>(std::llround(train_frac * static_cast<double>(n)));
  target = std::clamp<size_t>(target, 1, n - 1);

  train.clear();
  test.clear();
  if (unit == SplitUnit::Item) {
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);
    train.assign(order.begin(), order.begin() + static_cast<long>(target));
    test.assign(order.begin() + static_cast<long>(target), order.end());
  } else {
    std::map<std::string, std::vector<size_t>> by_scene;
    for (size_t i = 0; i < n; ++i) by_scene[scenes[i]].push_back(i);
    std::vector<std::string> ids;
    for (const auto& kv : by_scene) ids.push_back(kv.first);
    if (ids.size() < 2) fail(Err::InsufficientData, "scene split needs >= 2 scenes");
    rng.shuffle(ids);
    size_t filled = 0;
    for (const std::string& s : ids) {
      auto& idx = by_scene[s];
      if (filled < target) {
        train.insert(train.end(), idx.begin(), idx.end());
        filled += idx.size();
      } else {
        test.insert(test.end(), idx.begin(), idx.end());
      }
    }
    if (train.empty() || test.empty())
      fail(Err::InsufficientData, "scene split left one side empty");
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
  }
}

namespace {

TrialResult evaluate_split(const Prepared& p, const std::vector<size_t>& train_idx,
                           const std::vector<size_t>& test_idx, const GridSearchCfg& grid,
                           uint64_t trial_seed) {
  std::vector<std::vector<double>> train_rows;
  std::vector<double> train_y;
  train_rows.reserve(train_idx.size());
  for (size_t i : train_idx) {
    train_rows.push_back(p.rows[i]);
    train_y.push_back(p.train_targets[i]);
  }

  GridSearchResult gs = grid_search(train_rows, train_y, grid, trial_seed);
  SvrParams params{gs.c, gs.gamma, grid.epsilon};
  SvrModel model = svr_train(train_rows, train_y, params, trial_seed);

  std::vector<double> pred, truth;
  pred.reserve(test_idx.size());
  for (size_t i : test_idx) {
    // Undo the polarity so predictions live on the original scale.
    pred.push_back(svr_predict(model, p.rows[i]) * p.polarity_sign);
    truth.push_back(p.scores[i]);
  }

  TrialResult r;
  r.c = gs.c;
  r.gamma = gs.gamma;
  r.srcc = srcc(pred, truth);
  LogisticFit fit = logistic_fit(pred, truth);
  r.beta = fit.beta;
  r.lcc = lcc(fit.remapped, truth);
  r.rmse = rmse(fit.remapped, truth);
  r.outlier_ratio = outlier_ratio(fit.remapped, truth);
  return r;
}

}  // namespace

EvalReport run_protocol(const LabeledDataset& ds, const ProtocolCfg& cfg) {
  if (cfg.n_trials < 1) fail(Err::ConfigError, "n_trials must be >= 1");
  if (!(cfg.train_frac > 0.0 && cfg.train_frac < 1.0))
    fail(Err::ConfigError, "train_frac must lie in (0, 1)");
  Prepared p = prepare(ds);
  if (p.rows.size() < 5) fail(Err::InsufficientData, "protocol needs at least 5 items");

  auto t0 = std::chrono::steady_clock::now();
  EvalReport report;
  report.trials.resize(static_cast<size_t>(cfg.n_trials));
  report.n_items = static_cast<int>(p.rows.size());
  report.split_unit = cfg.split_unit == SplitUnit::Item ? "item" : "scene";
  report.polarity = ds.polarity == ScorePolarity::HigherBetter ? "higher_better" : "lower_better";

  // Trials are independent; each draws its own forked stream so parallel and
  // serial runs agree exactly.
  std::exception_ptr first_error;
#pragma omp parallel for schedule(dynamic)
  for (int t = 0; t < cfg.n_trials; ++t) {
    try {
      Rng rng = Rng::fork(cfg.seed, static_cast<uint64_t>(t));
      std::vector<size_t> train_idx, test_idx;
      protocol_split(p.scenes, cfg.train_frac, cfg.split_unit, rng, train_idx, test_idx);
      report.trials[static_cast<size_t>(t)] =
          evaluate_split(p, train_idx, test_idx, cfg.grid, rng.next_u64());
    } catch (...) {
#pragma omp critical
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);

  auto metric = [&](auto sel) {
    std::vector<double> v;
    v.reserve(report.trials.size());
    for (const TrialResult& r : report.trials) v.push_back(sel(r));
    return median(std::move(v));
  };
  report.median_srcc = metric([](const TrialResult& r) { return r.srcc; });
  report.median_lcc = metric([](const TrialResult& r) { return r.lcc; });
  report.median_rmse = metric([](const TrialResult& r) { return r.rmse; });
  report.median_outlier_ratio = metric([](const TrialResult& r) { return r.outlier_ratio; });
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

CrossDatasetResult cross_dataset(const LabeledDataset& train, const LabeledDataset& test,
                                 const std::vector<std::string>& shared_distortions,
                                 const ProtocolCfg& cfg) {
  if (train.layout != test.layout)
    fail(Err::LayoutMismatch, "train and test feature layouts differ");
  LabeledDataset tr = filter_distortions(train, shared_distortions);
  LabeledDataset te = filter_distortions(test, shared_distortions);
  if (tr.rows.empty() || te.rows.empty())
    fail(Err::InsufficientData, "distortion filter left an empty side");

  Prepared ptr = prepare(tr);
  Prepared pte = prepare(te);
  if (pte.rows.size() < 5) fail(Err::InsufficientData, "cross-dataset test side too small");

  std::vector<size_t> train_idx(ptr.rows.size()), test_idx(pte.rows.size());
  for (size_t i = 0; i < train_idx.size(); ++i) train_idx[i] = i;
  for (size_t i = 0; i < test_idx.size(); ++i) test_idx[i] = i;

  // Reuse the split evaluator over a merged view. Training targets keep the
  // train-side polarity; predictions are presented on the test-side scale.
  Prepared merged;
  merged.polarity_sign = pte.polarity_sign;
  merged.rows = ptr.rows;
  merged.scores = ptr.scores;
  merged.train_targets = ptr.train_targets;
  merged.scenes = ptr.scenes;
  size_t offset = merged.rows.size();
  merged.rows.insert(merged.rows.end(), pte.rows.begin(), pte.rows.end());
  merged.scores.insert(merged.scores.end(), pte.scores.begin(), pte.scores.end());
  // Test-side targets keep the *test* polarity for metric reporting; training
  // never touches them.
  for (size_t i = 0; i < pte.rows.size(); ++i) {
    merged.train_targets.push_back(pte.train_targets[i]);
    merged.scenes.push_back(pte.scenes[i]);
    test_idx[i] = offset + i;
  }

  CrossDatasetResult res;
  res.n_train = static_cast<int>(train_idx.size());
  res.n_test = static_cast<int>(test_idx.size());
  res.metrics = evaluate_split(merged, train_idx, test_idx, cfg.grid, cfg.seed);
  return res;
}

std::string report_to_json(const EvalReport& report, const std::string& config_echo) {
  nlohmann::ordered_json j;
  j["version"] = "lfqa-report-v1";
  j["n_items"] = report.n_items;
  j["split_unit"] = report.split_unit;
  j["polarity"] = report.polarity;
  j["outlier_definition"] = "abs(error) > 2 * stddev(subjective)";
  j["median"] = {{"srcc", report.median_srcc},
                 {"lcc", report.median_lcc},
                 {"rmse", report.median_rmse},
                 {"outlier_ratio", report.median_outlier_ratio}};
  nlohmann::ordered_json trials = nlohmann::ordered_json::array();
  for (const TrialResult& t : report.trials) {
    trials.push_back({{"srcc", t.srcc},
                      {"lcc", t.lcc},
                      {"rmse", t.rmse},
                      {"outlier_ratio", t.outlier_ratio},
                      {"beta", t.beta},
                      {"c", t.c},
                      {"gamma", t.gamma}});
  }
  j["trials"] = std::move(trials);
  if (!config_echo.empty()) j["config"] = nlohmann::ordered_json::parse(config_echo);
  return j.dump(2) + "\n";
}

}  // namespace lfqa
