// Test-only reference oracles, independent of the library implementation
// paths they are used to check.
#pragma once

#include <gsl/gsl_cdf.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "lfqa/rng.hpp"

namespace oracles {

// ------------------------------------------------------------------ GGD/AGGD

inline double ggd_beta(double alpha, double sigma) {
  return sigma * std::sqrt(std::tgamma(1.0 / alpha) / std::tgamma(3.0 / alpha));
}

/// Inverse-CDF draw from the symmetric generalized Gaussian GGD(alpha, sigma):
/// |X| has CDF P(1/alpha, (x/beta)^alpha), inverted with GSL's gamma inverse.
inline double ggd_inverse_cdf(double alpha, double sigma, double u) {
  double beta = ggd_beta(alpha, sigma);
  double tail = u < 0.5 ? 1.0 - 2.0 * u : 2.0 * u - 1.0;
  double g = gsl_cdf_gamma_Pinv(tail, 1.0 / alpha, 1.0);
  double mag = beta * std::pow(g, 1.0 / alpha);
  return u < 0.5 ? -mag : mag;
}

inline std::vector<double> ggd_samples(double alpha, double sigma, size_t n, uint64_t seed) {
  lfqa::Rng rng(seed);
  std::vector<double> u(n);
  for (double& v : u) v = rng.next_double();
  std::vector<double> out(n);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i)
    out[static_cast<size_t>(i)] = ggd_inverse_cdf(alpha, sigma, u[static_cast<size_t>(i)]);
  return out;
}

/// Asymmetric variant: side chosen with probability beta_l/(beta_l+beta_r),
/// magnitude from the one-sided GGD of that side.
inline std::vector<double> aggd_samples(double alpha, double sigma_l, double sigma_r, size_t n,
                                        uint64_t seed) {
  lfqa::Rng rng(seed);
  double bl = ggd_beta(alpha, sigma_l);
  double br = ggd_beta(alpha, sigma_r);
  double p_left = bl / (bl + br);
  std::vector<double> out(n);
  for (size_t i = 0; i < n; ++i) {
    bool left = rng.next_double() < p_left;
    double beta = left ? bl : br;
    double g = gsl_cdf_gamma_Pinv(rng.next_double(), 1.0 / alpha, 1.0);
    double mag = beta * std::pow(g, 1.0 / alpha);
    out[i] = left ? -mag : mag;
  }
  return out;
}

// ------------------------------------------------------------------ riu2 LBP

/// Brute-force riu2: rotate to the minimal code (the ROR minimum), count the
/// bitwise transitions by walking the circle, and collapse non-uniform
/// patterns to P+1.
inline int riu2_brute_force(uint64_t pattern, int p) {
  const uint64_t mask = (uint64_t{1} << p) - 1;
  pattern &= mask;
  uint64_t min_code = pattern;
  for (int k = 1; k < p; ++k) {
    uint64_t rot = ((pattern >> k) | (pattern << (p - k))) & mask;
    if (rot < min_code) min_code = rot;
  }
  int transitions = 0;
  int ones = 0;
  for (int i = 0; i < p; ++i) {
    int bit = static_cast<int>((min_code >> i) & 1);
    int next = static_cast<int>((min_code >> ((i + 1) % p)) & 1);
    ones += bit;
    transitions += bit != next;
  }
  return transitions <= 2 ? ones : p + 1;
}

// ---------------------------------------------------- projected-gradient QP

/// Independent solver for the epsilon-SVR dual: minimize
///   f(a) = 1/2 a'Qb a + p'a   over  0 <= a <= C,  z'a = 0
/// with Qb = [[Q,-Q],[-Q,Q]], p = [eps - y; eps + y], z = [+1; -1],
/// by projected gradient descent. Returns the achieved objective.
inline double svr_dual_pg(const std::vector<double>& q, size_t n, const std::vector<double>& y,
                          double c, double eps, int iters = 200000) {
  const size_t m = 2 * n;
  auto sign_of = [n](size_t t) { return t < n ? 1.0 : -1.0; };
  auto row_of = [n](size_t t) { return t < n ? t : t - n; };
  std::vector<double> p(m);
  for (size_t t = 0; t < n; ++t) p[t] = eps - y[t];
  for (size_t t = n; t < m; ++t) p[t] = eps + y[t - n];

  // Lipschitz bound: max row sum of |Qb|.
  double lips = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (size_t j = 0; j < n; ++j) row += std::fabs(q[i * n + j]);
    lips = std::max(lips, 2.0 * row);
  }
  const double step = 1.0 / std::max(lips, 1e-9);

  auto project = [&](std::vector<double>& v) {
    // Find lambda with sum_t z_t * clip(v_t - lambda z_t, 0, C) = 0.
    double lo = -1e6, hi = 1e6;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      double s = 0.0;
      for (size_t t = 0; t < m; ++t) {
        double z = sign_of(t);
        double x = std::clamp(v[t] - mid * z, 0.0, c);
        s += z * x;
      }
      if (s > 0.0)
        lo = mid;
      else
        hi = mid;
    }
    double lambda = 0.5 * (lo + hi);
    for (size_t t = 0; t < m; ++t)
      v[t] = std::clamp(v[t] - lambda * sign_of(t), 0.0, c);
  };

  std::vector<double> a(m, 0.0), grad(m), qa(n);
  for (int it = 0; it < iters; ++it) {
    // beta = a - a*, Qb a = z .* (Q beta)
    for (size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (size_t j = 0; j < n; ++j) acc += q[i * n + j] * (a[j] - a[j + n]);
      qa[i] = acc;
    }
    for (size_t t = 0; t < m; ++t) grad[t] = sign_of(t) * qa[row_of(t)] + p[t];
    for (size_t t = 0; t < m; ++t) a[t] -= step * grad[t];
    project(a);
  }

  double obj = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (size_t j = 0; j < n; ++j) acc += q[i * n + j] * (a[j] - a[j + n]);
    qa[i] = acc;
  }
  for (size_t t = 0; t < m; ++t)
    obj += 0.5 * a[t] * sign_of(t) * qa[row_of(t)] + p[t] * a[t];
  return obj;
}

}  // namespace oracles
