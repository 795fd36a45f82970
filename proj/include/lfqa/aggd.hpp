#pragma once

#include <span>

namespace lfqa {

/// Parameters of the zero-mean asymmetric generalized Gaussian fit plus the
/// two supplementary raw-sample moments.
struct AggdParams {
  double alpha = 0.0;    // shape, in [0.2, 10]
  double sigma_l = 0.0;  // left scale
  double sigma_r = 0.0;  // right scale
  double eta = 0.0;      // (beta_r - beta_l) * Gamma(2/a) / Gamma(1/a)
  double skewness = 0.0; // E[(x-mu)^3] / sd^3 of the raw samples
  double kurtosis = 0.0; // E[(x-mu)^4] / sd^4, plain (Gaussian -> 3)

  double beta_l() const;
  double beta_r() const;
};

/// Moment-matching AGGD estimator: left/right second moments about zero, the
/// generalized Gaussian ratio statistic, and inversion of the ratio function
/// over the alpha grid [0.2, 10] in steps of 0.001 (nearest grid point).
/// Throws DegenerateSamples for empty/too few samples, zero variance, or
/// samples that never cross zero.
AggdParams fit_aggd(std::span<const double> samples);

}  // namespace lfqa
