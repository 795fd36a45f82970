#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lfqa/features.hpp"

namespace lfqa {

/// Per-dimension (min, max) of the training rows; applied affinely so the
/// training range maps onto [-1, +1]. Constant dimensions map to 0 and test
/// values outside the range are not clipped.
struct ScalingParams {
  std::vector<double> min;
  std::vector<double> max;
};

ScalingParams scale_fit(const std::vector<std::vector<double>>& rows);
std::vector<double> scale_apply(const ScalingParams& p, const std::vector<double>& row);
std::vector<std::vector<double>> scale_apply_all(const ScalingParams& p,
                                                 const std::vector<std::vector<double>>& rows);

struct SvrParams {
  double c = 1.0;
  double gamma = 0.5;
  double epsilon = 0.1;  // on targets scaled to [0, 1]
};

/// Epsilon-SVR with an RBF kernel. Support vectors and dual coefficients live
/// in scaled feature / scaled target space; predict() undoes both scalings.
struct SvrModel {
  FeatureLayout layout;
  ScalingParams scaling;
  SvrParams params;
  std::vector<std::vector<double>> support_vectors;
  std::vector<double> coefficients;  // alpha - alpha*, |coef| <= C
  double bias = 0.0;
  double target_min = 0.0;   // target scaling: y' = (y - min) / range
  double target_range = 0.0; // 0 for constant targets
  bool converged = true;
  uint64_t iterations = 0;
  double kkt_violation = 0.0;   // final maximal violating-pair gap
  double dual_objective = 0.0;  // minimization form: 1/2 a'Qa + p'a

  double predict_scaled_row(const std::vector<double>& scaled_row) const;
};

/// Trains on unscaled feature rows and raw targets; feature scaling is fitted
/// on the rows and stored in the model. The SMO solver stops when the maximal
/// KKT violation drops to 1e-3 or after the iteration cap (recorded on the
/// model). Deterministic: working-set ties break by index; `seed` is part of
/// the signature for API stability but the solve itself is seed-free.
SvrModel svr_train(const std::vector<std::vector<double>>& rows, const std::vector<double>& targets,
                   const SvrParams& params, uint64_t seed, const FeatureLayout& layout = {});

double svr_predict(const SvrModel& model, const std::vector<double>& row);

struct GridSearchCfg {
  std::vector<double> c_grid;      // default 2^-3 .. 2^7
  std::vector<double> gamma_grid;  // default 2^-9 .. 2^3
  double epsilon = 0.1;
  int folds = 3;

  static GridSearchCfg defaults();
};

struct GridSearchResult {
  double c = 0.0;
  double gamma = 0.0;
  double cv_rmse = 0.0;
};

/// k-fold cross-validated RMSE minimized over the (C, gamma) grid; fold
/// assignment is a deterministic shuffle from `seed`, and ties prefer the
/// smaller C, then the smaller gamma.
GridSearchResult grid_search(const std::vector<std::vector<double>>& rows,
                             const std::vector<double>& targets, const GridSearchCfg& cfg,
                             uint64_t seed);

/// Self-describing JSON persistence; numbers survive the round trip
/// bit-exactly. Layout mismatches at load/predict raise LayoutMismatch.
std::string svr_model_to_json(const SvrModel& model);
SvrModel svr_model_from_json(const std::string& text);
void save_svr_model(const std::string& path, const SvrModel& model);
SvrModel load_svr_model(const std::string& path);

}  // namespace lfqa
