#pragma once

#include <string>

#include "lfqa/features.hpp"
#include "lfqa/protocol.hpp"
#include "lfqa/synth.hpp"

namespace lfqa {

/// The single source of configuration defaults. A JSON document may override
/// any subset; unknown keys are rejected (ConfigError). Command-line flags
/// override the document.
struct RunConfig {
  FeatureCfg features;
  ProtocolCfg protocol;
  ScorePolarity polarity = ScorePolarity::HigherBetter;
  BenchmarkCfg synth;

  static RunConfig defaults() { return RunConfig{}; }
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text);

/// Canonical JSON echo of a config (used inside eval reports).
std::string config_to_json(const RunConfig& cfg);

}  // namespace lfqa
