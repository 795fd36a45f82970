#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "lfqa/config.hpp"
#include "lfqa/dataset.hpp"
#include "lfqa/gdd.hpp"
#include "lfqa/image_io.hpp"
#include "lfqa/metrics.hpp"
#include "lfqa/parallel.hpp"
#include "lfqa/protocol.hpp"
#include "lfqa/svr.hpp"
#include "lfqa/synth.hpp"
#include "lfqa/wlbp.hpp"

namespace fs = std::filesystem;
using namespace lfqa;

namespace {

constexpr const char* kDefaultLayout = "r{v}_c{u}.pgm";

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct ManifestEntry {
  std::string item;
  std::string scene;
  std::string distortion = "none";
  int level = 0;
  std::optional<double> score;
  fs::path path;
};

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// Manifest CSV: `item` and `path` are required; scene, kind/distortion,
// level and score/pseudo_mos/mos columns are picked up when present.
std::vector<ManifestEntry> load_manifest(const fs::path& file) {
  std::ifstream in(file);
  if (!in) fail(Err::IoError, file.string() + ": cannot open");
  std::string line;
  if (!std::getline(in, line)) fail(Err::IoError, file.string() + ": empty manifest");
  std::vector<std::string> header = split_line(line);

  auto column = [&](std::initializer_list<const char*> names) -> int {
    for (const char* n : names)
      for (size_t i = 0; i < header.size(); ++i)
        if (header[i] == n) return static_cast<int>(i);
    return -1;
  };
  int c_item = column({"item"});
  int c_path = column({"path"});
  int c_scene = column({"scene"});
  int c_dist = column({"kind", "distortion"});
  int c_level = column({"level"});
  int c_score = column({"score", "pseudo_mos", "mos", "jod"});
  if (c_item < 0 || c_path < 0)
    fail(Err::IoError, file.string() + ": manifest needs 'item' and 'path' columns");

  std::vector<ManifestEntry> entries;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> f = split_line(line);
    if (f.size() != header.size())
      fail(Err::IoError, file.string() + ": wrong column count for '" + line + "'");
    ManifestEntry e;
    e.item = f[c_item];
    e.scene = c_scene >= 0 ? f[c_scene] : e.item;
    if (c_dist >= 0) e.distortion = f[c_dist];
    if (c_level >= 0 && !f[c_level].empty()) e.level = std::stoi(f[c_level]);
    if (c_score >= 0 && !f[c_score].empty()) e.score = std::stod(f[c_score]);
    fs::path p = f[c_path];
    e.path = p.is_absolute() ? p : file.parent_path() / p;
    entries.push_back(std::move(e));
  }
  return entries;
}

int cmd_extract(const std::string& input, const std::string& layout, const RunConfig& cfg,
                const std::string& out_path) {
  std::vector<ManifestEntry> entries;
  if (fs::is_directory(input)) {
    ManifestEntry e;
    e.item = fs::path(input).filename().string();
    if (e.item.empty()) e.item = "lightfield";
    e.scene = e.item;
    e.path = input;
    entries.push_back(std::move(e));
  } else {
    entries = load_manifest(input);
  }
  if (entries.empty()) fail(Err::InsufficientData, input + ": no items to extract");

  LabeledDataset ds;
  ds.polarity = cfg.polarity;
  ds.rows.resize(entries.size());
  std::vector<double> item_seconds(entries.size(), 0.0);

  std::exception_ptr first_error;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < static_cast<int>(entries.size()); ++i) {
    try {
      auto t0 = std::chrono::steady_clock::now();
      const ManifestEntry& e = entries[static_cast<size_t>(i)];
      LightField lf = load_lightfield(e.path, layout);
      FeatureVector fv = extract_features(lf, cfg.features);
      DatasetRow row;
      row.item = e.item;
      row.scene = e.scene;
      row.distortion = e.distortion;
      row.level = e.level;
      row.score = e.score;
      row.features = std::move(fv.values);
      bool mismatch = false;
#pragma omp critical
      {
        if (ds.layout.names.empty())
          ds.layout = fv.layout;
        else if (!(ds.layout == fv.layout))
          mismatch = true;
      }
      if (mismatch)
        fail(Err::LayoutMismatch, e.item + ": feature layout differs from earlier items");
      ds.rows[static_cast<size_t>(i)] = std::move(row);
      item_seconds[static_cast<size_t>(i)] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    } catch (const std::exception&) {
#pragma omp critical
      if (!first_error) {
        try {
          std::throw_with_nested(
              Error(Err::IoError, "while processing item " + entries[static_cast<size_t>(i)].item));
        } catch (...) {
          first_error = std::current_exception();
        }
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);

  for (size_t i = 0; i < entries.size(); ++i)
    std::fprintf(stderr, "extract %s: %.3f s\n", entries[i].item.c_str(), item_seconds[i]);

  save_features_csv(out_path, ds);
  std::fprintf(stderr, "wrote %zu rows (%zu features) to %s\n", ds.rows.size(), ds.layout.dim(),
               out_path.c_str());
  return 0;
}

// Pulls targets out of a dataset: the `score` column by default, or a named
// feature column (which is then removed from the features).
void select_targets(LabeledDataset& ds, const std::string& column,
                    std::vector<std::vector<double>>& rows, std::vector<double>& targets) {
  int drop = -1;
  if (column != "score") {
    for (size_t i = 0; i < ds.layout.names.size(); ++i)
      if (ds.layout.names[i] == column) drop = static_cast<int>(i);
    if (drop < 0) fail(Err::ConfigError, "no column named '" + column + "'");
    ds.layout.names.erase(ds.layout.names.begin() + drop);
  }
  for (DatasetRow& r : ds.rows) {
    if (drop >= 0) {
      targets.push_back(r.features[static_cast<size_t>(drop)]);
      r.features.erase(r.features.begin() + drop);
    } else {
      if (!r.score) fail(Err::InsufficientData, r.item + ": missing score");
      targets.push_back(*r.score);
    }
    rows.push_back(r.features);
  }
}

int cmd_train(const std::string& features_path, const std::string& score_column,
              const RunConfig& cfg, const std::string& out_path) {
  LabeledDataset ds = load_features_csv(features_path);
  if (ds.rows.empty()) fail(Err::EmptyTrainingSet, features_path + ": no rows");

  std::vector<std::vector<double>> rows;
  std::vector<double> targets;
  select_targets(ds, score_column, rows, targets);
  double sign = cfg.polarity == ScorePolarity::LowerBetter ? -1.0 : 1.0;
  for (double& t : targets) t *= sign;

  GridSearchResult gs = grid_search(rows, targets, cfg.protocol.grid, cfg.protocol.seed);
  std::fprintf(stderr, "grid search: C=%g gamma=%g cv_rmse=%g\n", gs.c, gs.gamma, gs.cv_rmse);
  SvrParams params{gs.c, gs.gamma, cfg.protocol.grid.epsilon};
  SvrModel model = svr_train(rows, targets, params, cfg.protocol.seed, ds.layout);
  if (!model.converged)
    std::fprintf(stderr, "warning: SMO hit the iteration cap (%llu updates)\n",
                 static_cast<unsigned long long>(model.iterations));
  save_svr_model(out_path, model);
  std::fprintf(stderr, "wrote model (%zu support vectors) to %s\n", model.support_vectors.size(),
               out_path.c_str());
  return 0;
}

int cmd_predict(const std::string& model_path, const std::string& features_path,
                const RunConfig& cfg, const std::string& out_path) {
  SvrModel model = load_svr_model(model_path);
  LabeledDataset ds = load_features_csv(features_path);
  if (!(model.layout == ds.layout))
    fail(Err::LayoutMismatch, "model and features carry different layouts");
  double sign = cfg.polarity == ScorePolarity::LowerBetter ? -1.0 : 1.0;

  std::ofstream out(out_path, std::ios::binary);
  if (!out) fail(Err::IoError, out_path + ": cannot write");
  out << "item,prediction\n";
  for (const DatasetRow& r : ds.rows)
    out << r.item << "," << fmt17(svr_predict(model, r.features) * sign) << "\n";
  if (!out) fail(Err::IoError, out_path + ": write failed");
  return 0;
}

int cmd_eval(const std::string& features_path, const std::string& test_features_path,
             const std::vector<std::string>& distortions, const RunConfig& cfg,
             const std::string& out_path) {
  LabeledDataset ds = load_features_csv(features_path);
  ds.polarity = cfg.polarity;

  std::string echo = config_to_json(cfg);
  std::string json;
  if (test_features_path.empty()) {
    EvalReport report = run_protocol(ds, cfg.protocol);
    std::fprintf(stderr,
                 "protocol: %d trials on %d items in %.2f s (median SRCC %.4f, LCC %.4f, "
                 "RMSE %.4f, OR %.4f)\n",
                 static_cast<int>(report.trials.size()), report.n_items, report.elapsed_seconds,
                 report.median_srcc, report.median_lcc, report.median_rmse,
                 report.median_outlier_ratio);
    json = report_to_json(report, echo);
  } else {
    LabeledDataset test = load_features_csv(test_features_path);
    test.polarity = cfg.polarity;
    CrossDatasetResult res = cross_dataset(ds, test, distortions, cfg.protocol);
    nlohmann::ordered_json j;
    j["version"] = "lfqa-report-v1";
    j["mode"] = "cross_dataset";
    j["n_train"] = res.n_train;
    j["n_test"] = res.n_test;
    j["metrics"] = {{"srcc", res.metrics.srcc},
                    {"lcc", res.metrics.lcc},
                    {"rmse", res.metrics.rmse},
                    {"outlier_ratio", res.metrics.outlier_ratio},
                    {"beta", res.metrics.beta},
                    {"c", res.metrics.c},
                    {"gamma", res.metrics.gamma}};
    j["config"] = nlohmann::ordered_json::parse(echo);
    json = j.dump(2) + "\n";
    std::fprintf(stderr, "cross-dataset: train %d test %d SRCC %.4f\n", res.n_train, res.n_test,
                 res.metrics.srcc);
  }

  std::ofstream out(out_path, std::ios::binary);
  if (!out) fail(Err::IoError, out_path + ": cannot write");
  out << json;
  if (!out) fail(Err::IoError, out_path + ": write failed");
  return 0;
}

int cmd_synth(uint64_t seed, const RunConfig& cfg, const std::string& layout,
              const std::string& out_dir) {
  std::vector<BenchmarkItem> items = build_benchmark(seed, cfg.synth);
  save_benchmark(out_dir, items, layout);
  std::fprintf(stderr, "wrote %zu light fields to %s\n", items.size(), out_dir.c_str());
  return 0;
}

int cmd_histdump(const std::string& input, const std::string& layout, const std::string& what,
                 const RunConfig& cfg, const std::string& out_path) {
  LightField lf = load_lightfield(input, layout);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) fail(Err::IoError, out_path + ": cannot write");

  if (what == "gdd") {
    // Pooled direction histogram over every usable orientation.
    const int bins = cfg.features.gdd.bins;
    std::vector<double> hist(static_cast<size_t>(bins), 0.0);
    int used = 0;
    for (EpiOrientation o : {EpiOrientation::Vertical, EpiOrientation::Horizontal}) {
      if (!orientation_usable(lf, o)) continue;
      std::vector<double> h = gdd_orientation_histogram(lf, o, bins);
      for (size_t i = 0; i < h.size(); ++i) hist[i] += h[i];
      ++used;
    }
    if (used == 0) fail(Err::NoUsableEpis, input + ": no usable EPI orientation");
    out << "bin_start_deg,mass\n";
    for (int b = 0; b < bins; ++b)
      out << (-180.0 + 360.0 * b / bins) << "," << fmt17(hist[static_cast<size_t>(b)] / used)
          << "\n";
  } else if (what == "wlbp") {
    out << "orientation,r,p,bin,mass\n";
    for (EpiOrientation o : {EpiOrientation::Vertical, EpiOrientation::Horizontal}) {
      if (!orientation_usable(lf, o)) continue;
      std::vector<EpiSlice> epis = extract_epis(lf, o);
      for (const LbpRung& rung : cfg.features.lbp.ladder) {
        std::vector<LbpLabelMap> maps(epis.size());
        for (size_t i = 0; i < epis.size(); ++i) maps[i] = lbp_riu2(epis[i], rung);
        WlbpHistogram h = wlbp_aggregate(maps);
        for (size_t b = 0; b < h.bins.size(); ++b)
          out << orientation_name(o) << "," << rung.radius << "," << rung.neighbors << "," << b
              << "," << fmt17(h.bins[b]) << "\n";
      }
    }
  } else {
    fail(Err::ConfigError, "--what must be 'gdd' or 'wlbp'");
  }
  if (!out) fail(Err::IoError, out_path + ": write failed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"No-reference light field image quality assessment toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  int jobs = 0;
  app.add_option("--config", config_path, "JSON config file")->capture_default_str();
  app.add_option("--jobs", jobs, "worker thread cap (0 = hardware)")->capture_default_str();

  auto* sc_extract = app.add_subcommand("extract", "Extract features from light fields");
  std::string in_path, out_path, layout = kDefaultLayout;
  sc_extract->add_option("--input", in_path, "light field directory or manifest CSV")->required();
  sc_extract->add_option("--layout", layout, "view filename pattern with {u},{v}")
      ->capture_default_str();
  sc_extract->add_option("--out", out_path, "output features CSV")->required();

  auto* sc_train = app.add_subcommand("train", "Train the quality regressor");
  std::string features_path, score_column = "score", model_path;
  sc_train->add_option("--features", features_path, "features CSV")->required();
  sc_train->add_option("--scores", score_column, "target column name")->capture_default_str();
  sc_train->add_option("--out", model_path, "output model JSON")->required();

  auto* sc_predict = app.add_subcommand("predict", "Predict scores with a trained model");
  std::string pred_model, pred_features, pred_out;
  sc_predict->add_option("--model", pred_model, "model JSON")->required();
  sc_predict->add_option("--features", pred_features, "features CSV")->required();
  sc_predict->add_option("--out", pred_out, "output scores CSV")->required();

  auto* sc_eval = app.add_subcommand("eval", "Run the random-split evaluation protocol");
  std::string eval_features, eval_out, eval_test;
  std::vector<std::string> eval_distortions;
  long long eval_trials = -1;
  long long eval_seed = -1;
  sc_eval->add_option("--features", eval_features, "features CSV")->required();
  sc_eval->add_option("--out", eval_out, "output report JSON")->required();
  sc_eval->add_option("--test-features", eval_test,
                      "cross-dataset mode: train on --features, test on this CSV");
  sc_eval->add_option("--distortions", eval_distortions,
                      "cross-dataset shared-distortion filter (tags)");
  sc_eval->add_option("--trials", eval_trials, "override protocol.n_trials");
  sc_eval->add_option("--seed", eval_seed, "override protocol.seed");

  auto* sc_synth = app.add_subcommand("synth", "Generate the synthetic benchmark");
  std::string synth_out, synth_layout = kDefaultLayout;
  uint64_t synth_seed = 1;
  sc_synth->add_option("--out", synth_out, "output directory")->required();
  sc_synth->add_option("--seed", synth_seed, "master seed")->capture_default_str();
  sc_synth->add_option("--layout", synth_layout, "view filename pattern")->capture_default_str();

  auto* sc_hist = app.add_subcommand("histdump", "Dump GDD/WLBP histograms as CSV");
  std::string hist_in, hist_layout = kDefaultLayout, hist_what, hist_out;
  sc_hist->add_option("--input", hist_in, "light field directory")->required();
  sc_hist->add_option("--layout", hist_layout, "view filename pattern")->capture_default_str();
  sc_hist->add_option("--what", hist_what, "gdd or wlbp")->required();
  sc_hist->add_option("--out", hist_out, "output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return 2;
  }

  try {
    set_jobs(jobs);
    RunConfig cfg = config_path.empty() ? RunConfig::defaults() : load_config(config_path);
    if (eval_trials > 0) cfg.protocol.n_trials = static_cast<int>(eval_trials);
    if (eval_seed >= 0) cfg.protocol.seed = static_cast<uint64_t>(eval_seed);

    if (sc_extract->parsed()) return cmd_extract(in_path, layout, cfg, out_path);
    if (sc_train->parsed()) return cmd_train(features_path, score_column, cfg, model_path);
    if (sc_predict->parsed()) return cmd_predict(pred_model, pred_features, cfg, pred_out);
    if (sc_eval->parsed())
      return cmd_eval(eval_features, eval_test, eval_distortions, cfg, eval_out);
    if (sc_synth->parsed()) return cmd_synth(synth_seed, cfg, synth_layout, synth_out);
    if (sc_hist->parsed()) return cmd_histdump(hist_in, hist_layout, hist_what, cfg, hist_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    try {
      std::rethrow_if_nested(e);
    } catch (const std::exception& nested) {
      std::cerr << "  caused by: " << nested.what() << "\n";
    } catch (...) {
    }
    return 1;
  }
  return 0;
}
