#pragma once

#include <string>
#include <vector>

#include "lfqa/image.hpp"

namespace lfqa {

/// 4-D luminance container L(u,v,s,t): a U x V grid of S x T views.
/// u is the horizontal view index, v the vertical one; (s,t) are the pixel
/// coordinates inside a view (s along the width). Immutable after build.
struct LightField {
  int num_u = 0;       // U
  int num_v = 0;       // V
  int view_width = 0;  // S
  int view_height = 0; // T
  std::vector<Image> views;  // indexed v * U + u

  const Image& view(int u, int v) const { return views[static_cast<size_t>(v) * num_u + u]; }
  Image& view(int u, int v) { return views[static_cast<size_t>(v) * num_u + u]; }

  double sample(int u, int v, int s, int t) const { return view(u, v).at(s, t); }
};

/// Assembles a light field from a dense grid of equally sized views laid out
/// in (v, u) order. Throws DimensionMismatch / EmptyInput on bad input.
LightField make_lightfield(int num_u, int num_v, std::vector<Image> views);

enum class EpiOrientation { Horizontal, Vertical };

const char* orientation_name(EpiOrientation o);

/// One epipolar-plane slice. The angular axis runs along image rows and the
/// spatial axis along columns:
///   horizontal slice (fixed v*, t*):  pixels is U rows x S cols, at(u, s) = L(u, v*, s, t*)
///   vertical slice   (fixed u*, s*):  pixels is V rows x T cols, at(v, t) = L(u*, v, s*, t)
struct EpiSlice {
  EpiOrientation orientation = EpiOrientation::Horizontal;
  int fixed_angular = 0;  // v* for horizontal, u* for vertical
  int fixed_spatial = 0;  // t* for horizontal, s* for vertical
  Image pixels;

  int angular_extent() const { return pixels.height; }
  int spatial_extent() const { return pixels.width; }
  double at(int angular, int spatial) const { return pixels.at(spatial, angular); }
};

/// All slices of one orientation in fixed enumeration order
/// (fixed_angular ascending, then fixed_spatial).
/// Throws DegenerateOrientation when the angular extent is < 3.
std::vector<EpiSlice> extract_epis(const LightField& lf, EpiOrientation orientation);

/// True when extract_epis(lf, orientation) would not throw.
bool orientation_usable(const LightField& lf, EpiOrientation orientation);

}  // namespace lfqa
