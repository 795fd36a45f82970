#include "lfqa/aggd.hpp"

#include <cmath>
#include <vector>

#include "lfqa/errors.hpp"

namespace lfqa {

namespace {

constexpr double kAlphaLo = 0.2;
constexpr double kAlphaHi = 10.0;
constexpr double kAlphaStep = 0.001;

// Generalized Gaussian ratio rho(alpha) = Gamma(2/a)^2 / (Gamma(1/a) Gamma(3/a)),
// tabulated once over the inversion grid.
const std::vector<double>& rho_table() {
  static const std::vector<double> table = [] {
    const int n = static_cast<int>(std::round((kAlphaHi - kAlphaLo) / kAlphaStep)) + 1;
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) {
      double a = kAlphaLo + kAlphaStep * i;
      t[i] = std::tgamma(2.0 / a) * std::tgamma(2.0 / a) /
             (std::tgamma(1.0 / a) * std::tgamma(3.0 / a));
    }
    return t;
  }();
  return table;
}

double gamma_ratio_sqrt(double alpha) {
  return std::sqrt(std::tgamma(1.0 / alpha) / std::tgamma(3.0 / alpha));
}

}  // namespace

double AggdParams::beta_l() const { return sigma_l * gamma_ratio_sqrt(alpha); }
double AggdParams::beta_r() const { return sigma_r * gamma_ratio_sqrt(alpha); }

AggdParams fit_aggd(std::span<const double> samples) {
  const size_t n = samples.size();
  if (n < 2) fail(Err::DegenerateSamples, "AGGD fit needs samples");

  double sum = 0.0, sum_abs = 0.0, sum_sq = 0.0;
  double neg_sq = 0.0, pos_sq = 0.0;
  size_t neg_count = 0, pos_count = 0;
  for (double x : samples) {
    sum += x;
    sum_abs += std::fabs(x);
    sum_sq += x * x;
    if (x < 0.0) {
      neg_sq += x * x;
      ++neg_count;
    } else if (x > 0.0) {
      pos_sq += x * x;
      ++pos_count;
    }
  }
  const double dn = static_cast<double>(n);
  const double mean = sum / dn;
  const double variance = sum_sq / dn - mean * mean;
  if (!(variance > 0.0)) fail(Err::DegenerateSamples, "zero sample variance");
  if (neg_count == 0 || pos_count == 0)
    fail(Err::DegenerateSamples, "samples never cross zero");

  AggdParams p;
  p.sigma_l = std::sqrt(neg_sq / static_cast<double>(neg_count));
  p.sigma_r = std::sqrt(pos_sq / static_cast<double>(pos_count));

  // Ratio statistic and grid inversion (nearest grid point).
  double gamma_hat = p.sigma_l / p.sigma_r;
  double r_hat = (sum_abs / dn) * (sum_abs / dn) / (sum_sq / dn);
  double r_hat_norm = r_hat * (gamma_hat * gamma_hat * gamma_hat + 1.0) * (gamma_hat + 1.0) /
                      ((gamma_hat * gamma_hat + 1.0) * (gamma_hat * gamma_hat + 1.0));

  const auto& rho = rho_table();
  double best_diff = 1e300;
  size_t best_i = 0;
  for (size_t i = 0; i < rho.size(); ++i) {
    double diff = std::fabs(rho[i] - r_hat_norm);
    if (diff < best_diff) {
      best_diff = diff;
      best_i = i;
    }
  }
  p.alpha = kAlphaLo + kAlphaStep * static_cast<double>(best_i);

  p.eta = (p.beta_r() - p.beta_l()) * std::tgamma(2.0 / p.alpha) / std::tgamma(1.0 / p.alpha);

  // Plain (non-excess) moments of the raw samples.
  double m3 = 0.0, m4 = 0.0;
  for (double x : samples) {
    double d = x - mean;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m3 /= dn;
  m4 /= dn;
  const double sd = std::sqrt(variance);
  p.skewness = m3 / (sd * sd * sd);
  p.kurtosis = m4 / (variance * variance);
  return p;
}

}  // namespace lfqa
