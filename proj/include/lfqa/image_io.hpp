#pragma once

#include <filesystem>
#include <string>

#include "lfqa/image.hpp"
#include "lfqa/lightfield.hpp"

namespace lfqa {

enum class ColorPolicy {
  Luma,         // convert RGB to luminance with BT.601 weights
  RejectColor,  // DecodeError on non-grayscale input
};

/// Decodes PNG, PPM/PGM (P5/P6) or BMP, dispatching on magic bytes. Sources
/// with more than 8 bits per sample are rescaled to [0, 255].
Image load_image(const std::filesystem::path& path, ColorPolicy policy = ColorPolicy::Luma);

/// Binary PGM (P5, maxval 255). Values are rounded and clamped to [0, 255].
void save_pgm(const std::filesystem::path& path, const Image& img);

/// Loads a view grid from `dir`. `layout` is a filename pattern made of
/// literal text plus {u} and {v} decimal placeholders, e.g. "r{v}_c{u}.png".
/// U and V are inferred from the matched indices (offsets normalized, so
/// 1-based grids work). Throws MissingView on grid gaps, DimensionMismatch
/// when view sizes differ and DecodeError for unreadable files.
LightField load_lightfield(const std::filesystem::path& dir, const std::string& layout,
                           ColorPolicy policy = ColorPolicy::Luma);

/// Writes lf as a grid of PGM views named by `layout` (same micro-language).
void save_lightfield(const std::filesystem::path& dir, const LightField& lf,
                     const std::string& layout);

/// Expands {u},{v} placeholders with concrete indices.
std::string format_view_name(const std::string& layout, int u, int v);

}  // namespace lfqa
