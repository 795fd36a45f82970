#include "lfqa/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

namespace lfqa {

namespace {

using json = nlohmann::ordered_json;

void reject_unknown(const json& obj, const std::set<std::string>& known,
                    const std::string& where) {
  for (const auto& [key, _] : obj.items())
    if (!known.count(key)) fail(Err::ConfigError, where + ": unknown key '" + key + "'");
}

template <class T>
void get_if(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) {
    try {
      out = obj.at(key).get<T>();
    } catch (const std::exception& e) {
      fail(Err::ConfigError, std::string(key) + ": " + e.what());
    }
  }
}

void parse_disparity(const json& j, DisparityCfg& cfg) {
  reject_unknown(j, {"d_max", "window"}, "disparity");
  get_if(j, "d_max", cfg.d_max);
  get_if(j, "window", cfg.window);
}

void parse_activity(const json& j, ActivityCfg& cfg) {
  reject_unknown(j, {"n", "a1", "a2"}, "activity");
  get_if(j, "n", cfg.n);
  get_if(j, "a1", cfg.a1);
  get_if(j, "a2", cfg.a2);
}

void parse_gdd(const json& j, GddCfg& cfg) {
  reject_unknown(j, {"bins"}, "gdd");
  get_if(j, "bins", cfg.bins);
}

void parse_lbp(const json& j, LbpConfig& cfg) {
  reject_unknown(j, {"ladder", "variant"}, "lbp");
  if (j.contains("variant")) {
    std::string v = j.at("variant").get<std::string>();
    if (v == "p8r")
      cfg = LbpConfig::standard();
    else if (v == "p3r")
      cfg = LbpConfig::text_variant();
    else
      fail(Err::ConfigError, "lbp.variant must be 'p8r' or 'p3r'");
  }
  if (j.contains("ladder")) {
    cfg.ladder.clear();
    for (const auto& rung : j.at("ladder")) {
      reject_unknown(rung, {"r", "p", "t"}, "lbp.ladder entry");
      LbpRung r;
      get_if(rung, "r", r.radius);
      get_if(rung, "p", r.neighbors);
      get_if(rung, "t", r.threshold);
      cfg.ladder.push_back(r);
    }
  }
  validate(cfg);
}

void parse_svr(const json& j, GridSearchCfg& cfg) {
  reject_unknown(j, {"c_grid", "gamma_grid", "epsilon", "folds"}, "svr");
  get_if(j, "c_grid", cfg.c_grid);
  get_if(j, "gamma_grid", cfg.gamma_grid);
  get_if(j, "epsilon", cfg.epsilon);
  get_if(j, "folds", cfg.folds);
  if (cfg.c_grid.empty() || cfg.gamma_grid.empty())
    fail(Err::ConfigError, "svr grids may not be empty");
  if (cfg.folds < 2) fail(Err::ConfigError, "svr.folds must be >= 2");
}

void parse_protocol(const json& j, ProtocolCfg& cfg, ScorePolarity& polarity) {
  reject_unknown(j, {"n_trials", "train_frac", "split_unit", "seed", "polarity"}, "protocol");
  get_if(j, "n_trials", cfg.n_trials);
  get_if(j, "train_frac", cfg.train_frac);
  get_if(j, "seed", cfg.seed);
  if (j.contains("split_unit")) {
    std::string s = j.at("split_unit").get<std::string>();
    if (s == "item")
      cfg.split_unit = SplitUnit::Item;
    else if (s == "scene")
      cfg.split_unit = SplitUnit::Scene;
    else
      fail(Err::ConfigError, "protocol.split_unit must be 'item' or 'scene'");
  }
  if (j.contains("polarity")) {
    std::string s = j.at("polarity").get<std::string>();
    if (s == "higher_better" || s == "mos")
      polarity = ScorePolarity::HigherBetter;
    else if (s == "lower_better" || s == "dmos")
      polarity = ScorePolarity::LowerBetter;
    else
      fail(Err::ConfigError, "protocol.polarity must be 'mos' or 'dmos'");
  }
}

void parse_synth(const json& j, BenchmarkCfg& cfg) {
  reject_unknown(j, {"scenes", "levels", "kinds", "views_u", "views_v", "width", "height"},
                 "synth");
  get_if(j, "scenes", cfg.n_scenes);
  get_if(j, "levels", cfg.levels);
  get_if(j, "views_u", cfg.base.num_u);
  get_if(j, "views_v", cfg.base.num_v);
  get_if(j, "width", cfg.base.view_width);
  get_if(j, "height", cfg.base.view_height);
  if (j.contains("kinds")) {
    cfg.kinds.clear();
    for (const auto& k : j.at("kinds")) cfg.kinds.push_back(kind_from_name(k.get<std::string>()));
  }
}

void parse_scales(const json& j, std::vector<int>& scales) {
  scales = j.get<std::vector<int>>();
  if (scales.empty()) fail(Err::ConfigError, "scales may not be empty");
  for (int s : scales)
    if (s != 1 && s != 2) fail(Err::ConfigError, "scales entries must be 1 or 2");
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text, nullptr, true, true);  // allow comments
  } catch (const std::exception& e) {
    fail(Err::ConfigError, std::string("config JSON: ") + e.what());
  }
  if (!j.is_object()) fail(Err::ConfigError, "config root must be an object");
  reject_unknown(j, {"disparity", "activity", "scales", "gdd", "lbp", "svr", "protocol", "synth"},
                 "config");

  RunConfig cfg = RunConfig::defaults();
  if (j.contains("disparity")) parse_disparity(j.at("disparity"), cfg.features.lcn.disparity);
  if (j.contains("activity")) parse_activity(j.at("activity"), cfg.features.lcn.activity);
  if (j.contains("scales")) parse_scales(j.at("scales"), cfg.features.lcn.scales);
  if (j.contains("gdd")) parse_gdd(j.at("gdd"), cfg.features.gdd);
  if (j.contains("lbp")) parse_lbp(j.at("lbp"), cfg.features.lbp);
  if (j.contains("svr")) parse_svr(j.at("svr"), cfg.protocol.grid);
  if (j.contains("protocol")) parse_protocol(j.at("protocol"), cfg.protocol, cfg.polarity);
  if (j.contains("synth")) parse_synth(j.at("synth"), cfg.synth);

  if (cfg.features.lcn.disparity.d_max < 0) fail(Err::ConfigError, "disparity.d_max must be >= 0");
  if (cfg.features.lcn.disparity.window < 3 || cfg.features.lcn.disparity.window % 2 == 0)
    fail(Err::ConfigError, "disparity.window must be odd >= 3");
  if (cfg.features.lcn.activity.n < 3 || cfg.features.lcn.activity.n % 2 == 0)
    fail(Err::ConfigError, "activity.n must be odd >= 3");
  if (cfg.features.gdd.bins < 2) fail(Err::ConfigError, "gdd.bins must be >= 2");
  if (cfg.protocol.n_trials < 1) fail(Err::ConfigError, "protocol.n_trials must be >= 1");
  if (!(cfg.protocol.train_frac > 0.0 && cfg.protocol.train_frac < 1.0))
    fail(Err::ConfigError, "protocol.train_frac must lie in (0, 1)");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Err::ConfigError, path + ": cannot open config");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config(text);
}

std::string config_to_json(const RunConfig& cfg) {
  json j;
  j["disparity"] = {{"d_max", cfg.features.lcn.disparity.d_max},
                    {"window", cfg.features.lcn.disparity.window}};
  j["activity"] = {{"n", cfg.features.lcn.activity.n},
                   {"a1", cfg.features.lcn.activity.a1},
                   {"a2", cfg.features.lcn.activity.a2}};
  j["scales"] = cfg.features.lcn.scales;
  j["gdd"] = {{"bins", cfg.features.gdd.bins}};
  json ladder = json::array();
  for (const LbpRung& r : cfg.features.lbp.ladder)
    ladder.push_back({{"r", r.radius}, {"p", r.neighbors}, {"t", r.threshold}});
  j["lbp"] = {{"ladder", std::move(ladder)}};
  j["svr"] = {{"c_grid", cfg.protocol.grid.c_grid},
              {"gamma_grid", cfg.protocol.grid.gamma_grid},
              {"epsilon", cfg.protocol.grid.epsilon},
              {"folds", cfg.protocol.grid.folds}};
  j["protocol"] = {
      {"n_trials", cfg.protocol.n_trials},
      {"train_frac", cfg.protocol.train_frac},
      {"split_unit", cfg.protocol.split_unit == SplitUnit::Item ? "item" : "scene"},
      {"seed", cfg.protocol.seed},
      {"polarity", cfg.polarity == ScorePolarity::HigherBetter ? "mos" : "dmos"}};
  json kinds = json::array();
  for (DistortionKind k : cfg.synth.kinds) kinds.push_back(kind_name(k));
  j["synth"] = {{"scenes", cfg.synth.n_scenes},   {"levels", cfg.synth.levels},
                {"kinds", std::move(kinds)},      {"views_u", cfg.synth.base.num_u},
                {"views_v", cfg.synth.base.num_v}, {"width", cfg.synth.base.view_width},
                {"height", cfg.synth.base.view_height}};
  return j.dump();
}

}  // namespace lfqa
