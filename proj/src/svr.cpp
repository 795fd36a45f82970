#include "lfqa/svr.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "lfqa/rng.hpp"

namespace lfqa {

ScalingParams scale_fit(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) fail(Err::EmptyTrainingSet, "cannot fit scaling on no rows");
  const size_t dim = rows.front().size();
  ScalingParams p;
  p.min.assign(dim, std::numeric_limits<double>::infinity());
  p.max.assign(dim, -std::numeric_limits<double>::infinity());
  for (const auto& row : rows) {
    if (row.size() != dim) fail(Err::LengthMismatch, "ragged feature rows");
    for (size_t i = 0; i < dim; ++i) {
      p.min[i] = std::min(p.min[i], row[i]);
      p.max[i] = std::max(p.max[i], row[i]);
    }
  }
  return p;
}

std::vector<double> scale_apply(const ScalingParams& p, const std::vector<double>& row) {
  if (row.size() != p.min.size()) fail(Err::LayoutMismatch, "row dimension differs from scaling");
  std::vector<double> out(row.size());
  for (size_t i = 0; i < row.size(); ++i) {
    double range = p.max[i] - p.min[i];
    out[i] = range > 0.0 ? -1.0 + 2.0 * (row[i] - p.min[i]) / range : 0.0;
  }
  return out;
}

std::vector<std::vector<double>> scale_apply_all(const ScalingParams& p,
                                                 const std::vector<std::vector<double>>& rows) {
  std::vector<std::vector<double>> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(scale_apply(p, r));
  return out;
}

namespace {

constexpr double kKktTol = 1e-3;
constexpr uint64_t kMaxUpdates = 10'000'000;

double sq_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// Dense Gram matrix of the scaled rows under the RBF kernel.
std::vector<double> rbf_gram(const std::vector<std::vector<double>>& rows, double gamma) {
  const size_t n = rows.size();
  std::vector<double> q(n * n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < static_cast<int>(n); ++i) {
    q[static_cast<size_t>(i) * n + i] = 1.0;
    for (size_t j = i + 1; j < n; ++j) {
      double k = std::exp(-gamma * sq_distance(rows[i], rows[j]));
      q[static_cast<size_t>(i) * n + j] = k;
      q[j * n + i] = k;
    }
  }
  return q;
}

struct SmoResult {
  std::vector<double> beta;  // alpha - alpha*
  double bias = 0.0;
  bool converged = false;
  uint64_t iterations = 0;
  double kkt_violation = 0.0;
  double dual_objective = 0.0;  // minimization form: 1/2 a'Qa + p'a
};

// Sequential minimal optimization on the 2n-variable epsilon-SVR dual with
// maximal-violating-pair working sets (ties break by index). Variables t < n
// are alpha (sign +1), t >= n are alpha* (sign -1).
SmoResult smo_solve(const std::vector<double>& q, size_t n, const std::vector<double>& y,
                    double c, double eps) {
  const size_t m2 = 2 * n;
  std::vector<double> a(m2, 0.0);
  std::vector<double> g(m2);  // gradient of the objective
  for (size_t t = 0; t < n; ++t) g[t] = eps - y[t];
  for (size_t t = n; t < m2; ++t) g[t] = eps + y[t - n];

  auto sign_of = [n](size_t t) { return t < n ? 1.0 : -1.0; };
  auto row_of = [n](size_t t) { return t < n ? t : t - n; };

  SmoResult res;
  double m_up = 0.0, m_low = 0.0;
  for (;;) {
    // Maximal violating pair.
    m_up = -std::numeric_limits<double>::infinity();
    m_low = std::numeric_limits<double>::infinity();
    size_t i = m2, j = m2;
    for (size_t t = 0; t < m2; ++t) {
      double z = sign_of(t);
      double v = -z * g[t];
      bool in_up = (z > 0.0) ? a[t] < c : a[t] > 0.0;
      bool in_low = (z > 0.0) ? a[t] > 0.0 : a[t] < c;
      if (in_up && v > m_up) {
        m_up = v;
        i = t;
      }
      if (in_low && v < m_low) {
        m_low = v;
        j = t;
      }
    }
    if (i == m2 || j == m2 || m_up - m_low <= kKktTol) {
      res.converged = (i != m2 && j != m2);
      break;
    }
    if (res.iterations >= kMaxUpdates) break;

    const double zi = sign_of(i), zj = sign_of(j);
    const size_t ri = row_of(i), rj = row_of(j);
    // K(x,x) = 1 for RBF.
    double eta = 2.0 - 2.0 * q[ri * n + rj];
    if (eta < 1e-12) eta = 1e-12;
    double step = (m_up - m_low) / eta;

    // Box caps along (da_i, da_j) = (zi, -zj) * step.
    double cap_i = zi > 0.0 ? c - a[i] : a[i];
    double cap_j = zj > 0.0 ? a[j] : c - a[j];
    step = std::min(step, std::min(cap_i, cap_j));

    a[i] = std::clamp(a[i] + zi * step, 0.0, c);
    a[j] = std::clamp(a[j] - zj * step, 0.0, c);

    for (size_t t = 0; t < m2; ++t)
      g[t] += sign_of(t) * step * (q[row_of(t) * n + ri] - q[row_of(t) * n + rj]);
    ++res.iterations;
  }

  res.kkt_violation = std::max(m_up - m_low, 0.0);
  res.bias = 0.5 * (m_up + m_low);
  if (!std::isfinite(res.bias)) res.bias = 0.0;

  res.beta.assign(n, 0.0);
  for (size_t t = 0; t < n; ++t) res.beta[t] = a[t] - a[t + n];

  double obj = 0.0;
  for (size_t t = 0; t < m2; ++t) {
    double p = t < n ? eps - y[t] : eps + y[t - n];
    obj += a[t] * (g[t] + p);
  }
  res.dual_objective = 0.5 * obj;
  return res;
}

}  // namespace

double SvrModel::predict_scaled_row(const std::vector<double>& scaled_row) const {
  double acc = bias;
  for (size_t i = 0; i < support_vectors.size(); ++i)
    acc += coefficients[i] * std::exp(-params.gamma * sq_distance(scaled_row, support_vectors[i]));
  return acc;
}

SvrModel svr_train(const std::vector<std::vector<double>>& rows, const std::vector<double>& targets,
                   const SvrParams& params, uint64_t seed, const FeatureLayout& layout) {
  (void)seed;  // the solve is deterministic; kept for signature stability
  if (rows.empty()) fail(Err::EmptyTrainingSet, "no training rows");
  if (rows.size() != targets.size()) fail(Err::LengthMismatch, "rows vs targets");
  if (!(params.c > 0.0) || !(params.gamma > 0.0) || params.epsilon < 0.0)
    fail(Err::ConfigError, "need C > 0, gamma > 0, epsilon >= 0");
  for (const auto& r : rows)
    for (double v : r)
      if (!std::isfinite(v)) fail(Err::NonFiniteInput, "non-finite feature value");
  for (double v : targets)
    if (!std::isfinite(v)) fail(Err::NonFiniteInput, "non-finite target");

  SvrModel model;
  model.layout = layout;
  model.params = params;
  model.scaling = scale_fit(rows);
  std::vector<std::vector<double>> scaled = scale_apply_all(model.scaling, rows);

  // Targets scaled to [0, 1]; epsilon lives on this scale.
  double ymin = targets[0], ymax = targets[0];
  for (double v : targets) {
    ymin = std::min(ymin, v);
    ymax = std::max(ymax, v);
  }
  model.target_min = ymin;
  model.target_range = ymax - ymin;
  std::vector<double> y(targets.size(), 0.0);
  if (model.target_range > 0.0)
    for (size_t i = 0; i < targets.size(); ++i)
      y[i] = (targets[i] - ymin) / model.target_range;

  std::vector<double> gram = rbf_gram(scaled, params.gamma);
  SmoResult sol = smo_solve(gram, scaled.size(), y, params.c, params.epsilon);

  model.bias = sol.bias;
  model.converged = sol.converged;
  model.iterations = sol.iterations;
  model.kkt_violation = sol.kkt_violation;
  model.dual_objective = sol.dual_objective;
  for (size_t i = 0; i < scaled.size(); ++i) {
    if (sol.beta[i] != 0.0) {
      model.support_vectors.push_back(scaled[i]);
      model.coefficients.push_back(sol.beta[i]);
    }
  }
  return model;
}

double svr_predict(const SvrModel& model, const std::vector<double>& row) {
  if (!model.layout.names.empty() && row.size() != model.layout.dim())
    fail(Err::LayoutMismatch, "feature row does not match the model layout");
  for (double v : row)
    if (!std::isfinite(v)) fail(Err::NonFiniteInput, "non-finite feature value");
  double scaled = model.predict_scaled_row(scale_apply(model.scaling, row));
  return scaled * model.target_range + model.target_min;
}

GridSearchCfg GridSearchCfg::defaults() {
  GridSearchCfg cfg;
  for (int e = -3; e <= 7; ++e) cfg.c_grid.push_back(std::ldexp(1.0, e));
  for (int e = -9; e <= 3; ++e) cfg.gamma_grid.push_back(std::ldexp(1.0, e));
  return cfg;
}

GridSearchResult grid_search(const std::vector<std::vector<double>>& rows,
                             const std::vector<double>& targets, const GridSearchCfg& cfg,
                             uint64_t seed) {
  if (cfg.c_grid.empty() || cfg.gamma_grid.empty()) fail(Err::ConfigError, "empty search grid");
  if (rows.size() != targets.size()) fail(Err::LengthMismatch, "rows vs targets");

  GridSearchResult first{cfg.c_grid.front(), cfg.gamma_grid.front(), 0.0};
  if (cfg.c_grid.size() == 1 && cfg.gamma_grid.size() == 1) return first;
  if (rows.size() < 2) return first;

  const size_t n = rows.size();
  const int folds = std::max(2, std::min<int>(cfg.folds, static_cast<int>(n)));

  ScalingParams scaling = scale_fit(rows);
  std::vector<std::vector<double>> scaled = scale_apply_all(scaling, rows);

  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);

  const size_t nc = cfg.c_grid.size(), ng = cfg.gamma_grid.size();
  std::vector<double> sq_err(nc * ng, 0.0);

  for (int f = 0; f < folds; ++f) {
    std::vector<size_t> train_idx, val_idx;
    for (size_t i = 0; i < n; ++i)
      (static_cast<int>(i % folds) == f ? val_idx : train_idx).push_back(order[i]);
    if (train_idx.empty() || val_idx.empty()) continue;

    // Distances once per fold; kernels per gamma; SMO per (gamma, C).
    const size_t tn = train_idx.size();
    std::vector<double> d2(tn * tn, 0.0);
    for (size_t i = 0; i < tn; ++i)
      for (size_t j = i + 1; j < tn; ++j) {
        double d = sq_distance(scaled[train_idx[i]], scaled[train_idx[j]]);
        d2[i * tn + j] = d;
        d2[j * tn + i] = d;
      }
    std::vector<double> vd2(val_idx.size() * tn);
    for (size_t i = 0; i < val_idx.size(); ++i)
      for (size_t j = 0; j < tn; ++j)
        vd2[i * tn + j] = sq_distance(scaled[val_idx[i]], scaled[train_idx[j]]);

    double ymin = targets[train_idx[0]], ymax = ymin;
    for (size_t i : train_idx) {
      ymin = std::min(ymin, targets[i]);
      ymax = std::max(ymax, targets[i]);
    }
    double range = ymax - ymin;
    std::vector<double> ty(tn, 0.0);
    if (range > 0.0)
      for (size_t i = 0; i < tn; ++i) ty[i] = (targets[train_idx[i]] - ymin) / range;

    for (size_t gi = 0; gi < ng; ++gi) {
      double gamma = cfg.gamma_grid[gi];
      std::vector<double> gram(tn * tn);
      for (size_t i = 0; i < tn * tn; ++i) gram[i] = std::exp(-gamma * d2[i]);
      std::vector<double> vk(vd2.size());
      for (size_t i = 0; i < vd2.size(); ++i) vk[i] = std::exp(-gamma * vd2[i]);

      for (size_t ci = 0; ci < nc; ++ci) {
        SmoResult sol = smo_solve(gram, tn, ty, cfg.c_grid[ci], cfg.epsilon);
        double err = 0.0;
        for (size_t i = 0; i < val_idx.size(); ++i) {
          double acc = sol.bias;
          for (size_t j = 0; j < tn; ++j)
            if (sol.beta[j] != 0.0) acc += sol.beta[j] * vk[i * tn + j];
          double pred = acc * range + ymin;
          double d = pred - targets[val_idx[i]];
          err += d * d;
        }
        sq_err[ci * ng + gi] += err;
      }
    }
  }

  // Lexicographic tie-break: smaller C, then smaller gamma.
  GridSearchResult best;
  double best_err = std::numeric_limits<double>::infinity();
  for (size_t ci = 0; ci < nc; ++ci)
    for (size_t gi = 0; gi < ng; ++gi)
      if (sq_err[ci * ng + gi] < best_err) {
        best_err = sq_err[ci * ng + gi];
        best.c = cfg.c_grid[ci];
        best.gamma = cfg.gamma_grid[gi];
      }
  best.cv_rmse = std::sqrt(best_err / static_cast<double>(n));
  return best;
}

// ------------------------------------------------------------- persistence

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kModelVersion = "lfqa-svr-v1";

}  // namespace

std::string svr_model_to_json(const SvrModel& model) {
  json j;
  j["version"] = kModelVersion;
  j["layout"] = {{"version", model.layout.version}, {"names", model.layout.names}};
  j["scaling"] = {{"min", model.scaling.min}, {"max", model.scaling.max}};
  j["params"] = {{"c", model.params.c}, {"gamma", model.params.gamma},
                 {"epsilon", model.params.epsilon}};
  j["target"] = {{"min", model.target_min}, {"range", model.target_range}};
  j["support_vectors"] = model.support_vectors;
  j["coefficients"] = model.coefficients;
  j["bias"] = model.bias;
  j["converged"] = model.converged;
  j["iterations"] = model.iterations;
  j["kkt_violation"] = model.kkt_violation;
  j["dual_objective"] = model.dual_objective;
  return j.dump(2) + "\n";
}

SvrModel svr_model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    fail(Err::DecodeError, std::string("model JSON: ") + e.what());
  }
  try {
    if (j.at("version").get<std::string>() != kModelVersion)
      fail(Err::LayoutMismatch, "unsupported model version");
    SvrModel m;
    m.layout.version = j.at("layout").at("version").get<std::string>();
    m.layout.names = j.at("layout").at("names").get<std::vector<std::string>>();
    m.scaling.min = j.at("scaling").at("min").get<std::vector<double>>();
    m.scaling.max = j.at("scaling").at("max").get<std::vector<double>>();
    m.params.c = j.at("params").at("c").get<double>();
    m.params.gamma = j.at("params").at("gamma").get<double>();
    m.params.epsilon = j.at("params").at("epsilon").get<double>();
    m.target_min = j.at("target").at("min").get<double>();
    m.target_range = j.at("target").at("range").get<double>();
    m.support_vectors = j.at("support_vectors").get<std::vector<std::vector<double>>>();
    m.coefficients = j.at("coefficients").get<std::vector<double>>();
    m.bias = j.at("bias").get<double>();
    m.converged = j.at("converged").get<bool>();
    m.iterations = j.at("iterations").get<uint64_t>();
    m.kkt_violation = j.at("kkt_violation").get<double>();
    m.dual_objective = j.at("dual_objective").get<double>();
    if (m.support_vectors.size() != m.coefficients.size())
      fail(Err::DecodeError, "support vector / coefficient count mismatch");
    return m;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail(Err::DecodeError, std::string("model JSON: ") + e.what());
  }
}

void save_svr_model(const std::string& path, const SvrModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Err::IoError, path + ": cannot write");
  out << svr_model_to_json(model);
  if (!out) fail(Err::IoError, path + ": write failed");
}

SvrModel load_svr_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Err::IoError, path + ": cannot open");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return svr_model_from_json(text);
}

}  // namespace lfqa
