#include "lfqa/features.hpp"

namespace lfqa {

namespace {

const char* kAggdNames[6] = {"alpha", "sigma_l", "sigma_r", "eta", "skew", "kurt"};
const char* kGddNames[4] = {"mean", "entropy", "skew", "kurt"};

void append_lcn_names(std::vector<std::string>& names, const LcnCfg& cfg) {
  for (int scale : cfg.scales)
    for (const char* n : kAggdNames)
      names.push_back("lcn.s" + std::to_string(scale) + "." + n);
}

void append_gdd_names(std::vector<std::string>& names, bool vertical, bool horizontal) {
  if (vertical)
    for (const char* n : kGddNames) names.push_back(std::string("gdd.ver.") + n);
  if (horizontal)
    for (const char* n : kGddNames) names.push_back(std::string("gdd.hor.") + n);
}

void append_wlbp_names(std::vector<std::string>& names, const LbpConfig& cfg, bool vertical,
                       bool horizontal) {
  auto one = [&](const char* orient) {
    for (const LbpRung& rung : cfg.ladder)
      for (int b = 0; b < rung.neighbors + 2; ++b)
        names.push_back("wlbp." + std::string(orient) + ".r" + std::to_string(rung.radius) + "p" +
                        std::to_string(rung.neighbors) + ".b" + std::to_string(b));
  };
  if (vertical) one("ver");
  if (horizontal) one("hor");
}

}  // namespace

FeatureLayout feature_layout_for(int num_u, int num_v, const FeatureCfg& cfg) {
  const bool vertical = num_v >= 3;
  const bool horizontal = num_u >= 3;
  if (!vertical && !horizontal)
    fail(Err::NoUsableEpis, "grid too small for EPI features");
  if (num_u < 2) fail(Err::NeedsTwoViews, "LCN needs U >= 2");
  FeatureLayout layout;
  append_lcn_names(layout.names, cfg.lcn);
  append_gdd_names(layout.names, vertical, horizontal);
  append_wlbp_names(layout.names, cfg.lbp, vertical, horizontal);
  return layout;
}

FeatureVector extract_features(const LightField& lf, const FeatureCfg& cfg) {
  FeatureVector fv;
  fv.layout = feature_layout_for(lf.num_u, lf.num_v, cfg);

  std::vector<double> lcn = lcn_features(lf, cfg.lcn);
  GddFeatures gdd = gdd_features(lf, cfg.gdd);
  WlbpFeatures wlbp = wlbp_features(lf, cfg.lbp);

  fv.values.reserve(fv.layout.dim());
  fv.values.insert(fv.values.end(), lcn.begin(), lcn.end());
  fv.values.insert(fv.values.end(), gdd.values.begin(), gdd.values.end());
  fv.values.insert(fv.values.end(), wlbp.values.begin(), wlbp.values.end());

  if (fv.values.size() != fv.layout.dim())
    fail(Err::LayoutMismatch, "feature length does not match the layout");
  return fv;
}

}  // namespace lfqa
