#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lfqa/features.hpp"

namespace lfqa {

/// Score polarity of a labeled set. MOS-like scores grow with quality;
/// JOD/DMOS-like sets are negated internally before training so higher always
/// means better, and metrics are reported on the original scale.
enum class ScorePolarity { HigherBetter, LowerBetter };

struct DatasetRow {
  std::string item;
  std::string scene;
  std::string distortion;
  int level = 0;
  std::optional<double> score;
  std::vector<double> features;
};

struct LabeledDataset {
  FeatureLayout layout;
  std::vector<DatasetRow> rows;
  ScorePolarity polarity = ScorePolarity::HigherBetter;
};

/// Features CSV: header `item,scene,distortion,level,score,<layout names...>`,
/// one row per item. Doubles are written with 17 significant digits so they
/// reparse bit-exactly.
void save_features_csv(const std::string& path, const LabeledDataset& ds);
LabeledDataset load_features_csv(const std::string& path);

/// Rows whose distortion tag is in `keep` (empty keeps everything).
LabeledDataset filter_distortions(const LabeledDataset& ds, const std::vector<std::string>& keep);

}  // namespace lfqa
