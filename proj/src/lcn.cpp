#include "lfqa/lcn.hpp"

#include "lfqa/mscn.hpp"
#include "lfqa/parallel.hpp"

namespace lfqa {

std::vector<AggdParams> lcn_fits(const LightField& lf, const LcnCfg& cfg) {
  if (lf.num_u < 2) fail(Err::NeedsTwoViews, "LCN needs at least one horizontal view pair");
  if (cfg.scales.empty()) fail(Err::ConfigError, "LCN needs at least one scale");
  for (int s : cfg.scales)
    if (s != 1 && s != 2) fail(Err::ConfigError, "LCN scales must be 1 or 2");

  CyclopeanArray arr = build_cyclopean_array(lf, cfg.disparity, cfg.activity);

  std::vector<AggdParams> fits;
  fits.reserve(cfg.scales.size());
  for (int scale : cfg.scales) {
    // MSCN maps per sub-cyclopean image; slots are independent.
    std::vector<Image> maps(arr.images.size());
    parallel_indexed(static_cast<int>(arr.images.size()), [&](int i) {
      const Image& src = arr.images[static_cast<size_t>(i)];
      maps[static_cast<size_t>(i)] = scale == 1 ? mscn(src) : mscn(downsample2(src));
    });
    // Pooling follows the mandated order: pairs ascending (v, u) -- the array
    // order -- with coefficients row-major.
    size_t count = 0;
    for (const Image& m : maps) count += m.size();
    std::vector<double> pooled;
    pooled.reserve(count);
    for (const Image& m : maps) pooled.insert(pooled.end(), m.data.begin(), m.data.end());
    fits.push_back(fit_aggd(pooled));
  }
  return fits;
}

std::vector<double> lcn_features(const LightField& lf, const LcnCfg& cfg) {
  std::vector<AggdParams> fits = lcn_fits(lf, cfg);
  std::vector<double> out;
  out.reserve(fits.size() * 6);
  for (const AggdParams& p : fits) {
    out.push_back(p.alpha);
    out.push_back(p.sigma_l);
    out.push_back(p.sigma_r);
    out.push_back(p.eta);
    out.push_back(p.skewness);
    out.push_back(p.kurtosis);
  }
  return out;
}

}  // namespace lfqa
