#include "lfqa/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>

#include "lfqa/image_io.hpp"
#include "lfqa/kernels.hpp"
#include "lfqa/rng.hpp"

namespace lfqa {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Smooth non-periodic texture: a bank of random cosine gratings. Analytic in
// its argument, so shifted resampling is exact at any offset.
struct Grating {
  double fx, fy, phase, amp;
};

struct LayerTexture {
  std::vector<Grating> gratings;
  double norm = 1.0;

  double eval(double x, double y) const {
    double acc = 0.0;
    for (const Grating& g : gratings)
      acc += g.amp * std::cos(kTwoPi * (g.fx * x + g.fy * y) + g.phase);
    return acc * norm;
  }
};

LayerTexture make_texture(Rng& rng, int richness) {
  LayerTexture tex;
  // Low-frequency structure plus a substantial high-frequency band: the
  // disparity matcher needs local variance everywhere, and compression /
  // blur surrogates need fine detail whose loss grades with the level.
  const int low_count = 4 + 2 * std::max(richness, 0);
  const int high_count = 3 + std::max(richness, 0);
  double amp_sum = 0.0;
  auto add = [&](double f_lo, double f_hi, double amp) {
    double f = f_lo + (f_hi - f_lo) * rng.next_double();
    double theta = kTwoPi * rng.next_double();
    tex.gratings.push_back({f * std::cos(theta), f * std::sin(theta),
                            kTwoPi * rng.next_double(), amp});
    amp_sum += amp;
  };
  for (int i = 0; i < low_count; ++i) add(0.02, 0.12, 1.0 / (1.0 + 0.4 * i));
  for (int i = 0; i < high_count; ++i) add(0.16, 0.46, 1.1 / high_count);
  tex.norm = 1.0 / amp_sum;  // |eval| <= 1
  return tex;
}

}  // namespace

void validate(const SceneSpec& spec) {
  if (spec.num_u < 1 || spec.num_v < 1 || spec.view_width < 8 || spec.view_height < 8)
    fail(Err::InvalidSpec, "scene grid or view size too small");
  if (spec.layer_disparities.empty()) fail(Err::InvalidSpec, "scene needs at least one layer");
  const double bound = spec.view_width / 4.0;
  const int max_views = std::max(spec.num_u, spec.num_v);
  for (double d : spec.layer_disparities) {
    if (!(std::fabs(d) * max_views < bound))
      fail(Err::InvalidSpec, "layer disparity would push content out of frame");
  }
}

LightField generate_scene(const SceneSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);
  const size_t layers = spec.layer_disparities.size();
  std::vector<LayerTexture> textures;
  textures.reserve(layers);
  for (size_t l = 0; l < layers; ++l) textures.push_back(make_texture(rng, spec.richness));

  std::vector<double> layer_weight(layers);
  double wsum = 0.0;
  for (size_t l = 0; l < layers; ++l) {
    layer_weight[l] = 1.0 / (1.0 + 0.5 * static_cast<double>(l));
    wsum += layer_weight[l];
  }
  for (double& w : layer_weight) w /= wsum;

  std::vector<Image> views(static_cast<size_t>(spec.num_u) * spec.num_v);
  const int total = spec.num_u * spec.num_v;
#pragma omp parallel for schedule(dynamic)
  for (int idx = 0; idx < total; ++idx) {
    int v = idx / spec.num_u;
    int u = idx % spec.num_u;
    Image img(spec.view_width, spec.view_height);
    for (int t = 0; t < spec.view_height; ++t) {
      for (int s = 0; s < spec.view_width; ++s) {
        double acc = 0.0;
        for (size_t l = 0; l < layers; ++l) {
          double k = spec.layer_disparities[l];
          acc += layer_weight[l] * textures[l].eval(s - k * u, t - k * v);
        }
        // Integer pixel values so grid files round-trip losslessly.
        img.at(s, t) = std::nearbyint(std::clamp(127.5 + 120.0 * acc, 0.0, 255.0));
      }
    }
    views[static_cast<size_t>(idx)] = std::move(img);
  }
  return make_lightfield(spec.num_u, spec.num_v, std::move(views));
}

const char* kind_name(DistortionKind k) {
  switch (k) {
    case DistortionKind::NnAngular: return "NN";
    case DistortionKind::LinearAngular: return "LINEAR";
    case DistortionKind::GaussBlur: return "GAUSS";
    case DistortionKind::Quant: return "QUANT";
  }
  return "?";
}

DistortionKind kind_from_name(const std::string& name) {
  if (name == "NN") return DistortionKind::NnAngular;
  if (name == "LINEAR") return DistortionKind::LinearAngular;
  if (name == "GAUSS") return DistortionKind::GaussBlur;
  if (name == "QUANT") return DistortionKind::Quant;
  fail(Err::InvalidSpec, "unknown distortion kind: " + name);
}

namespace {

// Angular subsampling along u: level L keeps max(2, U - L) evenly spaced
// views (endpoints always kept), so every level drops strictly more views.
std::vector<int> kept_views(int num_u, int level) {
  const int keep = std::max(2, num_u - level);
  if (keep >= num_u) {
    std::vector<int> all(static_cast<size_t>(num_u));
    for (int u = 0; u < num_u; ++u) all[static_cast<size_t>(u)] = u;
    return all;
  }
  std::vector<int> kept;
  for (int j = 0; j < keep; ++j)
    kept.push_back(static_cast<int>(
        std::llround(static_cast<double>(j) * (num_u - 1) / (keep - 1))));
  return kept;
}

LightField rebuild_views(const LightField& lf, const std::vector<Image>& views) {
  return make_lightfield(lf.num_u, lf.num_v, views);
}

LightField nn_angular(const LightField& lf, int level) {
  std::vector<int> kept = kept_views(lf.num_u, level);
  std::vector<Image> views = lf.views;
  for (int u = 0; u < lf.num_u; ++u) {
    int best = kept[0];
    for (int k : kept)
      if (std::abs(k - u) < std::abs(best - u)) best = k;  // ties keep the lower index
    if (best == u) continue;
    for (int v = 0; v < lf.num_v; ++v)
      views[static_cast<size_t>(v) * lf.num_u + u] = lf.view(best, v);
  }
  return rebuild_views(lf, views);
}

LightField linear_angular(const LightField& lf, int level) {
  std::vector<int> kept = kept_views(lf.num_u, level);
  std::vector<Image> views = lf.views;
  for (int u = 0; u < lf.num_u; ++u) {
    if (std::binary_search(kept.begin(), kept.end(), u)) continue;
    // Nearest kept neighbors on each side; beyond the last kept view the
    // single neighbor replicates.
    int lo = -1, hi = -1;
    for (int k : kept) {
      if (k < u) lo = k;
      if (k > u && hi < 0) hi = k;
    }
    for (int v = 0; v < lf.num_v; ++v) {
      Image out(lf.view_width, lf.view_height);
      if (lo >= 0 && hi >= 0) {
        const Image& a = lf.view(lo, v);
        const Image& b = lf.view(hi, v);
        for (size_t i = 0; i < out.data.size(); ++i)
          out.data[i] = 0.5 * (a.data[i] + b.data[i]);
      } else {
        out = lf.view(lo >= 0 ? lo : hi, v);
      }
      views[static_cast<size_t>(v) * lf.num_u + u] = std::move(out);
    }
  }
  return rebuild_views(lf, views);
}

LightField per_view(const LightField& lf, const std::function<Image(const Image&)>& op) {
  std::vector<Image> views(lf.views.size());
  const int total = static_cast<int>(lf.views.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < total; ++i) views[static_cast<size_t>(i)] = op(lf.views[i]);
  return make_lightfield(lf.num_u, lf.num_v, std::move(views));
}

}  // namespace

LightField apply_distortion(const LightField& lf, const DistortionSpec& d) {
  if (d.level < 0 || d.level > 5) fail(Err::InvalidSpec, "distortion level must be in 0..5");
  if (d.level == 0) return lf;
  switch (d.kind) {
    case DistortionKind::NnAngular:
      return nn_angular(lf, d.level);
    case DistortionKind::LinearAngular:
      return linear_angular(lf, d.level);
    case DistortionKind::GaussBlur: {
      double sigma = 0.5 * d.level;
      int radius = static_cast<int>(std::ceil(3.0 * sigma));
      std::vector<double> k = gaussian_kernel_1d(radius, sigma);
      return per_view(lf, [&](const Image& img) { return blur_replicate(img, k); });
    }
    case DistortionKind::Quant: {
      double step = 4.0 * d.level;
      return per_view(lf, [&](const Image& img) { return block_dct_quantize(img, step); });
    }
  }
  fail(Err::InvalidSpec, "unknown distortion kind");
}

std::vector<BenchmarkItem> build_benchmark(uint64_t master_seed, const BenchmarkCfg& cfg) {
  if (cfg.n_scenes < 2) fail(Err::InvalidSpec, "benchmark needs at least 2 scenes");
  if (cfg.levels < 1 || cfg.levels > 5) fail(Err::InvalidSpec, "levels must be in 1..5");

  const double max_disp = std::floor((cfg.base.view_width / 4.0 - 1.0) /
                                     std::max(cfg.base.num_u, cfg.base.num_v));
  if (max_disp < 1.0) fail(Err::InvalidSpec, "view size too small for unit disparity");

  std::vector<BenchmarkItem> items;
  char buf[64];
  for (int s = 0; s < cfg.n_scenes; ++s) {
    Rng scene_rng = Rng::fork(master_seed, static_cast<uint64_t>(s));
    SceneSpec spec = cfg.base;
    spec.seed = scene_rng.next_u64();
    spec.richness = 1 + s % 3;
    // Even scenes are single-layer shears; odd scenes add a second layer.
    spec.layer_disparities.clear();
    double d1 = 1.0 + static_cast<double>(scene_rng.uniform_int(0, static_cast<int64_t>(max_disp) - 1));
    spec.layer_disparities.push_back(d1);
    if (s % 2 == 1) {
      double d2 = -1.0 - static_cast<double>(
                             scene_rng.uniform_int(0, static_cast<int64_t>(max_disp) - 1));
      spec.layer_disparities.push_back(d2);
    }
    LightField pristine = generate_scene(spec);

    std::snprintf(buf, sizeof(buf), "scene%03d", s);
    std::string scene_id = buf;

    BenchmarkItem base;
    base.item = scene_id + "_pristine";
    base.scene = scene_id;
    base.distortion = DistortionSpec{DistortionKind::NnAngular, 0};
    base.pseudo_mos = 5.0;
    base.lightfield = pristine;
    items.push_back(std::move(base));

    for (DistortionKind kind : cfg.kinds) {
      for (int level = 1; level <= cfg.levels; ++level) {
        BenchmarkItem it;
        std::snprintf(buf, sizeof(buf), "%s_%s_l%d", scene_id.c_str(), kind_name(kind), level);
        it.item = buf;
        it.scene = scene_id;
        it.distortion = DistortionSpec{kind, level};
        it.pseudo_mos = 5.0 - level;
        it.lightfield = apply_distortion(pristine, it.distortion);
        items.push_back(std::move(it));
      }
    }
  }
  return items;
}

void save_benchmark(const std::string& dir, const std::vector<BenchmarkItem>& items,
                    const std::string& layout) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::ofstream manifest(fs::path(dir) / "manifest.csv", std::ios::binary);
  if (!manifest) fail(Err::IoError, dir + "/manifest.csv: cannot write");
  manifest << "item,scene,kind,level,pseudo_mos,path\n";
  for (const BenchmarkItem& it : items) {
    fs::path sub = fs::path(dir) / it.item;
    save_lightfield(sub, it.lightfield, layout);
    manifest << it.item << "," << it.scene << ","
             << (it.distortion.level == 0 ? "pristine" : kind_name(it.distortion.kind)) << ","
             << it.distortion.level << "," << it.pseudo_mos << "," << it.item << "\n";
  }
  if (!manifest) fail(Err::IoError, dir + "/manifest.csv: write failed");
}

}  // namespace lfqa
