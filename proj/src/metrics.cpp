#include "lfqa/metrics.hpp"

#include <gsl/gsl_cdf.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lfqa/errors.hpp"

namespace lfqa {

namespace {

void check_pair(std::span<const double> a, std::span<const double> b, size_t min_len) {
  if (a.size() != b.size()) fail(Err::LengthMismatch, "series lengths differ");
  if (a.size() < min_len)
    fail(Err::LengthMismatch, "need at least " + std::to_string(min_len) + " points");
}

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double pearson(std::span<const double> a, std::span<const double> b) {
  double ma = mean_of(a), mb = mean_of(b);
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    double da = a[i] - ma, db = b[i] - mb;
    cov += da * db;
    va += da * da;
    vb += db * db;
  }
  if (va <= 0.0 || vb <= 0.0) fail(Err::ZeroVariance, "constant series in correlation");
  return cov / std::sqrt(va * vb);
}

}  // namespace

std::vector<double> average_ranks(std::span<const double> v) {
  const size_t n = v.size();
  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });

  std::vector<double> ranks(n, 0.0);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
    double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;  // 1-based
    for (size_t k = i; k <= j; ++k) ranks[idx[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double srcc(std::span<const double> a, std::span<const double> b) {
  check_pair(a, b, 3);
  std::vector<double> ra = average_ranks(a);
  std::vector<double> rb = average_ranks(b);
  return pearson(ra, rb);
}

double lcc(std::span<const double> a, std::span<const double> b) {
  check_pair(a, b, 3);
  return pearson(a, b);
}

double rmse(std::span<const double> pred, std::span<const double> truth) {
  check_pair(pred, truth, 1);
  double s = 0.0;
  for (size_t i = 0; i < pred.size(); ++i) {
    double d = pred[i] - truth[i];
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(pred.size()));
}

double outlier_ratio(std::span<const double> pred, std::span<const double> truth) {
  check_pair(pred, truth, 1);
  double m = mean_of(truth);
  double var = 0.0;
  for (double t : truth) var += (t - m) * (t - m);
  var /= static_cast<double>(truth.size());
  double bound = 2.0 * std::sqrt(var);
  size_t outliers = 0;
  for (size_t i = 0; i < pred.size(); ++i)
    if (std::fabs(pred[i] - truth[i]) > bound) ++outliers;
  return static_cast<double>(outliers) / static_cast<double>(pred.size());
}

namespace {

inline double logistic_eval(const std::array<double, 5>& b, double q) {
  double e = b[1] * (q - b[2]);
  e = std::clamp(e, -500.0, 500.0);  // exp overflow guard
  return b[0] * (0.5 - 1.0 / (1.0 + std::exp(e))) + b[3] * q + b[4];
}

double logistic_sse(const std::array<double, 5>& b, std::span<const double> q,
                    std::span<const double> s) {
  double sse = 0.0;
  for (size_t i = 0; i < q.size(); ++i) {
    double d = logistic_eval(b, q[i]) - s[i];
    sse += d * d;
  }
  return sse;
}

// Standard Nelder-Mead on the 5 betas, deterministic start simplex.
std::array<double, 5> nelder_mead(std::array<double, 5> x0, std::span<const double> q,
                                  std::span<const double> s, int max_iter) {
  constexpr int kDim = 5;
  using Point = std::array<double, 5>;
  struct Vertex {
    Point x;
    double f;
  };
  auto eval = [&](const Point& p) { return logistic_sse(p, q, s); };

  std::vector<Vertex> simplex(kDim + 1);
  simplex[0] = {x0, eval(x0)};
  for (int i = 0; i < kDim; ++i) {
    Point p = x0;
    p[i] += (p[i] != 0.0 ? 0.05 * std::fabs(p[i]) : 0.0) + 0.1;
    simplex[i + 1] = {p, eval(p)};
  }

  Vertex best = simplex[0];
  for (const auto& v : simplex)
    if (v.f < best.f) best = v;

  for (int iter = 0; iter < max_iter; ++iter) {
    std::stable_sort(simplex.begin(), simplex.end(),
                     [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    if (simplex[0].f < best.f) best = simplex[0];
    if (std::fabs(simplex[kDim].f - simplex[0].f) <=
        1e-12 * (std::fabs(simplex[0].f) + 1e-12))
      break;

    Point centroid{};
    for (int i = 0; i < kDim; ++i)
      for (int d = 0; d < kDim; ++d) centroid[d] += simplex[i].x[d] / kDim;

    auto blend = [&](double t) {
      Point p;
      for (int d = 0; d < kDim; ++d) p[d] = centroid[d] + t * (simplex[kDim].x[d] - centroid[d]);
      return p;
    };

    Point refl = blend(-1.0);
    double f_refl = eval(refl);
    if (f_refl < simplex[0].f) {
      Point exp_p = blend(-2.0);
      double f_exp = eval(exp_p);
      simplex[kDim] = f_exp < f_refl ? Vertex{exp_p, f_exp} : Vertex{refl, f_refl};
    } else if (f_refl < simplex[kDim - 1].f) {
      simplex[kDim] = {refl, f_refl};
    } else {
      Point con = blend(f_refl < simplex[kDim].f ? -0.5 : 0.5);
      double f_con = eval(con);
      if (f_con < std::min(f_refl, simplex[kDim].f)) {
        simplex[kDim] = {con, f_con};
      } else {
        for (int i = 1; i <= kDim; ++i) {
          for (int d = 0; d < kDim; ++d)
            simplex[i].x[d] = simplex[0].x[d] + 0.5 * (simplex[i].x[d] - simplex[0].x[d]);
          simplex[i].f = eval(simplex[i].x);
        }
      }
    }
  }
  for (const auto& v : simplex)
    if (v.f < best.f) best = v;
  return best.x;
}

}  // namespace

LogisticFit logistic_fit(std::span<const double> q, std::span<const double> s) {
  check_pair(q, s, 5);
  double mq = mean_of(q), ms = mean_of(s);
  double var_q = 0.0, cov = 0.0;
  for (size_t i = 0; i < q.size(); ++i) {
    var_q += (q[i] - mq) * (q[i] - mq);
    cov += (q[i] - mq) * (s[i] - ms);
  }
  var_q /= static_cast<double>(q.size());
  cov /= static_cast<double>(q.size());
  if (var_q <= 0.0) fail(Err::DegenerateInput, "constant predictions");

  // Ordinary linear fit: the family nests it at beta1 = 0, so it is both the
  // descent start and the floor for the achieved SSE.
  double slope = cov / var_q;
  double intercept = ms - slope * mq;
  std::array<double, 5> linear{0.0, 1.0, mq, slope, intercept};
  double linear_sse = logistic_sse(linear, q, s);

  auto minmax = std::minmax_element(s.begin(), s.end());
  std::array<double, 5> init{*minmax.second - *minmax.first, 1.0 / std::sqrt(var_q), mq, slope,
                             intercept};

  std::array<double, 5> beta = nelder_mead(init, q, s, 2000);
  double sse = logistic_sse(beta, q, s);
  if (linear_sse < sse) {
    beta = linear;
    sse = linear_sse;
  }

  LogisticFit fit;
  fit.beta = beta;
  fit.sse = sse;
  fit.remapped.resize(q.size());
  for (size_t i = 0; i < q.size(); ++i) fit.remapped[i] = logistic_eval(beta, q[i]);
  return fit;
}

std::vector<std::vector<int>> significance_matrix(
    const std::vector<std::vector<double>>& method_samples, double confidence) {
  const size_t k = method_samples.size();
  for (const auto& m : method_samples)
    if (m.size() < 2) fail(Err::InsufficientSamples, "each method needs >= 2 samples");

  std::vector<double> means(k), vars(k);
  for (size_t i = 0; i < k; ++i) {
    means[i] = mean_of(method_samples[i]);
    double v = 0.0;
    for (double x : method_samples[i]) v += (x - means[i]) * (x - means[i]);
    vars[i] = v / static_cast<double>(method_samples[i].size() - 1);  // sample variance
  }

  const double alpha = 1.0 - confidence;
  std::vector<std::vector<int>> m(k, std::vector<int>(k, 0));
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = i + 1; j < k; ++j) {
      double ni = static_cast<double>(method_samples[i].size());
      double nj = static_cast<double>(method_samples[j].size());
      double se2 = vars[i] / ni + vars[j] / nj;
      int sig = 0;
      if (se2 > 0.0) {
        double t = (means[i] - means[j]) / std::sqrt(se2);
        // Welch-Satterthwaite degrees of freedom.
        double df = se2 * se2 /
                    (vars[i] * vars[i] / (ni * ni * (ni - 1.0)) +
                     vars[j] * vars[j] / (nj * nj * (nj - 1.0)));
        double p = 2.0 * gsl_cdf_tdist_Q(std::fabs(t), df);
        if (p < alpha) sig = t > 0.0 ? 1 : -1;
      } else if (means[i] != means[j]) {
        sig = means[i] > means[j] ? 1 : -1;
      }
      m[i][j] = sig;
      m[j][i] = -sig;
    }
  }
  return m;
}

}  // namespace lfqa
