#pragma once

#include <array>
#include <span>
#include <vector>

namespace lfqa {

/// Average ranks (ties share the mean rank), 1-based.
std::vector<double> average_ranks(std::span<const double> v);

/// Spearman rank-order correlation: Pearson correlation of average-ranked data.
double srcc(std::span<const double> a, std::span<const double> b);

/// Pearson linear correlation.
double lcc(std::span<const double> a, std::span<const double> b);

double rmse(std::span<const double> pred, std::span<const double> truth);

/// Fraction of predictions with |pred - truth| > 2 * stddev(truth)
/// (population stddev of the subjective scores; the source protocol reports
/// OR without defining it).
double outlier_ratio(std::span<const double> pred, std::span<const double> truth);

struct LogisticFit {
  std::array<double, 5> beta{};
  std::vector<double> remapped;  // q' at the fitted parameters
  double sse = 0.0;
};

/// Five-parameter monotone-plus-linear remap
///   q' = b1 * (1/2 - 1/(1 + exp(b2 (q - b3)))) + b4 q + b5
/// fitted by Nelder-Mead from a deterministic start, with the plain linear
/// fit kept as a floor: the returned SSE never exceeds the linear one.
/// Throws DegenerateInput for constant q or fewer than 5 points.
LogisticFit logistic_fit(std::span<const double> q, std::span<const double> s);

/// Welch two-sample t-test matrix over per-trial metric samples: entry (i,j)
/// is +1 / -1 when the row mean is significantly greater / smaller at the
/// given confidence, else 0. Diagonal 0; antisymmetric.
std::vector<std::vector<int>> significance_matrix(
    const std::vector<std::vector<double>>& method_samples, double confidence = 0.95);

}  // namespace lfqa
