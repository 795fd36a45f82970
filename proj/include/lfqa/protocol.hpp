#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "lfqa/dataset.hpp"
#include "lfqa/svr.hpp"

namespace lfqa {

enum class SplitUnit { Item, Scene };

struct ProtocolCfg {
  int n_trials = 1000;
  double train_frac = 0.8;
  SplitUnit split_unit = SplitUnit::Item;
  uint64_t seed = 1;
  GridSearchCfg grid = GridSearchCfg::defaults();
};

struct TrialResult {
  double srcc = 0.0;
  double lcc = 0.0;
  double rmse = 0.0;
  double outlier_ratio = 0.0;
  std::array<double, 5> beta{};
  double c = 0.0;
  double gamma = 0.0;
};

struct EvalReport {
  std::vector<TrialResult> trials;
  double median_srcc = 0.0;
  double median_lcc = 0.0;
  double median_rmse = 0.0;
  double median_outlier_ratio = 0.0;
  int n_items = 0;
  std::string split_unit;
  std::string polarity;
  double elapsed_seconds = 0.0;  // logged, never serialized into the report
};

/// The random-split evaluation protocol: per trial, split at train_frac,
/// scale on the train side, grid-search + train the SVR, predict the test
/// side, remap with the logistic fit and record SRCC/LCC/RMSE/OR. Medians
/// summarize the trials. Each trial draws from Rng::fork(seed, trial), so
/// parallel and serial runs agree exactly.
EvalReport run_protocol(const LabeledDataset& ds, const ProtocolCfg& cfg);

/// Single train on all of `train`, evaluation on `test` (optionally filtered
/// to shared distortion tags on both sides).
struct CrossDatasetResult {
  TrialResult metrics;
  int n_train = 0;
  int n_test = 0;
};

CrossDatasetResult cross_dataset(const LabeledDataset& train, const LabeledDataset& test,
                                 const std::vector<std::string>& shared_distortions,
                                 const ProtocolCfg& cfg);

double median(std::vector<double> v);

class Rng;

/// One train/test split over row indices. Item mode shuffles items; scene
/// mode shuffles whole scenes so no scene ends up on both sides. The train
/// side holds round(train_frac * n) items (scene mode: at least that many).
void protocol_split(const std::vector<std::string>& scenes, double train_frac, SplitUnit unit,
                    Rng& rng, std::vector<size_t>& train, std::vector<size_t>& test);

/// Report serialization (deterministic byte-for-byte for a given report).
std::string report_to_json(const EvalReport& report, const std::string& config_echo);

}  // namespace lfqa
