#pragma once

#include <vector>

#include "lfqa/aggd.hpp"
#include "lfqa/cyclopean.hpp"
#include "lfqa/lightfield.hpp"

namespace lfqa {

struct LcnCfg {
  DisparityCfg disparity;
  ActivityCfg activity;
  std::vector<int> scales = {1, 2};  // 1 = native, 2 = halved before MSCN
};

/// Cyclopean-array naturalness features: per scale, the MSCN coefficients of
/// every sub-cyclopean image are pooled into one sample set (pairs ascending
/// (v, u), coefficients row-major) and AGGD-fitted, yielding
/// (alpha, sigma_l, sigma_r, eta, skewness, kurtosis). Scales concatenate in
/// config order: the default {1, 2} gives 12 values.
/// Throws NeedsTwoViews when U < 2 and propagates DegenerateSamples.
std::vector<double> lcn_features(const LightField& lf, const LcnCfg& cfg);

/// Fitted parameters per scale, exposed for tests and feature naming.
std::vector<AggdParams> lcn_fits(const LightField& lf, const LcnCfg& cfg);

}  // namespace lfqa
