#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lfqa/lightfield.hpp"

namespace lfqa {

/// Layered-plane scene: each layer is a smooth random texture shifted per
/// view by (disparity * view offset) in both angular axes.
struct SceneSpec {
  uint64_t seed = 1;
  int num_u = 7;
  int num_v = 7;
  int view_width = 64;   // S
  int view_height = 48;  // T
  int richness = 2;      // texture component count scale
  std::vector<double> layer_disparities = {1.0};  // pixels per view step
};

void validate(const SceneSpec& spec);

/// Deterministic from the seed; single-layer scenes make every EPI an exact
/// shear. Pixel values are integers in [0, 255] so grid files round-trip.
LightField generate_scene(const SceneSpec& spec);

enum class DistortionKind { NnAngular, LinearAngular, GaussBlur, Quant };

const char* kind_name(DistortionKind k);
DistortionKind kind_from_name(const std::string& name);

struct DistortionSpec {
  DistortionKind kind = DistortionKind::NnAngular;
  int level = 0;  // 0 = identity, 1..5 increasing severity
};

/// Angular kinds subsample the u axis with stride (level + 1) and rebuild
/// dropped views by replication (NN) or by averaging the two nearest kept
/// views (LINEAR). GAUSS blurs each view with sigma = 0.5 * level and QUANT
/// applies 8x8 block transform quantization with step 4 * level.
LightField apply_distortion(const LightField& lf, const DistortionSpec& d);

struct BenchmarkItem {
  std::string item;
  std::string scene;
  DistortionSpec distortion;
  double pseudo_mos = 0.0;  // 5 - level
  LightField lightfield;
};

struct BenchmarkCfg {
  int n_scenes = 8;
  std::vector<DistortionKind> kinds = {DistortionKind::NnAngular, DistortionKind::LinearAngular,
                                       DistortionKind::GaussBlur, DistortionKind::Quant};
  int levels = 5;
  SceneSpec base;  // seed field ignored; per-scene seeds derive from master
};

/// Pristine + every (kind, level) copy per scene, with pseudo-MOS labels.
/// Scene 2k is single-layer, scene 2k+1 two-layer.
std::vector<BenchmarkItem> build_benchmark(uint64_t master_seed, const BenchmarkCfg& cfg);

/// Writes each item as a PGM view grid under dir/<item>/ plus manifest.csv
/// (item, scene, kind, level, pseudo_mos, path).
void save_benchmark(const std::string& dir, const std::vector<BenchmarkItem>& items,
                    const std::string& layout);

}  // namespace lfqa
