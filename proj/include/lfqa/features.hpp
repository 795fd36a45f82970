#pragma once

#include <string>
#include <vector>

#include "lfqa/gdd.hpp"
#include "lfqa/lcn.hpp"
#include "lfqa/lightfield.hpp"
#include "lfqa/wlbp.hpp"

namespace lfqa {

inline constexpr const char* kFeatureLayoutVersion = "lfqa-features-v1";

/// Named, versioned column layout of a feature vector. Two layouts are
/// compatible only when the versions and the full name lists match.
struct FeatureLayout {
  std::string version = kFeatureLayoutVersion;
  std::vector<std::string> names;

  size_t dim() const { return names.size(); }
  bool operator==(const FeatureLayout& o) const = default;
};

struct FeatureVector {
  FeatureLayout layout;
  std::vector<double> values;
};

struct FeatureCfg {
  LcnCfg lcn;
  GddCfg gdd;
  LbpConfig lbp = LbpConfig::standard();
};

/// Concatenates the three feature families (LCN, then GDD, then WLBP) with
/// their layout header. Degenerate orientations shrink the GDD/WLBP segments
/// as documented per module.
FeatureVector extract_features(const LightField& lf, const FeatureCfg& cfg);

/// Layout that extract_features would produce for a (U, V) grid, without
/// touching pixels. Used to validate dataset uniformity up front.
FeatureLayout feature_layout_for(int num_u, int num_v, const FeatureCfg& cfg);

}  // namespace lfqa
