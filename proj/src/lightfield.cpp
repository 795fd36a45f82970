#include "lfqa/lightfield.hpp"

#include <utility>

namespace lfqa {

LightField make_lightfield(int num_u, int num_v, std::vector<Image> views) {
  if (num_u < 1 || num_v < 1 || views.empty())
    fail(Err::EmptyInput, "light field needs at least one view");
  if (views.size() != static_cast<size_t>(num_u) * num_v)
    fail(Err::DimensionMismatch, "view count does not match the grid");
  const int w = views.front().width;
  const int h = views.front().height;
  for (const Image& im : views) {
    if (im.width != w || im.height != h)
      fail(Err::DimensionMismatch, "views differ in size");
  }
  LightField lf;
  lf.num_u = num_u;
  lf.num_v = num_v;
  lf.view_width = w;
  lf.view_height = h;
  lf.views = std::move(views);
  return lf;
}

const char* orientation_name(EpiOrientation o) {
  return o == EpiOrientation::Horizontal ? "horizontal" : "vertical";
}

bool orientation_usable(const LightField& lf, EpiOrientation orientation) {
  int angular = orientation == EpiOrientation::Horizontal ? lf.num_u : lf.num_v;
  return angular >= 3;
}

std::vector<EpiSlice> extract_epis(const LightField& lf, EpiOrientation orientation) {
  if (!orientation_usable(lf, orientation))
    fail(Err::DegenerateOrientation,
         std::string(orientation_name(orientation)) + " EPIs need an angular extent of 3");

  std::vector<EpiSlice> slices;
  if (orientation == EpiOrientation::Horizontal) {
    // One slice per (v*, t*): U rows of S samples.
    slices.reserve(static_cast<size_t>(lf.num_v) * lf.view_height);
    for (int v = 0; v < lf.num_v; ++v) {
      for (int t = 0; t < lf.view_height; ++t) {
        EpiSlice s;
        s.orientation = orientation;
        s.fixed_angular = v;
        s.fixed_spatial = t;
        s.pixels = Image(lf.view_width, lf.num_u);
        for (int u = 0; u < lf.num_u; ++u) {
          const Image& view = lf.view(u, v);
          for (int x = 0; x < lf.view_width; ++x) s.pixels.at(x, u) = view.at(x, t);
        }
        slices.push_back(std::move(s));
      }
    }
  } else {
    // One slice per (u*, s*): V rows of T samples.
    slices.reserve(static_cast<size_t>(lf.num_u) * lf.view_width);
    for (int u = 0; u < lf.num_u; ++u) {
      for (int x = 0; x < lf.view_width; ++x) {
        EpiSlice s;
        s.orientation = orientation;
        s.fixed_angular = u;
        s.fixed_spatial = x;
        s.pixels = Image(lf.view_height, lf.num_v);
        for (int v = 0; v < lf.num_v; ++v) {
          const Image& view = lf.view(u, v);
          for (int t = 0; t < lf.view_height; ++t) s.pixels.at(t, v) = view.at(x, t);
        }
        slices.push_back(std::move(s));
      }
    }
  }
  return slices;
}

}  // namespace lfqa
