#include "lfqa/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <regex>

namespace lfqa {

namespace {

double clamp255(double v) { return std::clamp(v, 0.0, 255.0); }

// Guard against nonsense headers before sizing any buffers.
void check_dims(long long w, long long h, const std::string& path) {
  if (w <= 0 || h <= 0 || w > (1 << 20) || h > (1 << 20) || w * h > (1ll << 28))
    fail(Err::DecodeError, path + ": implausible image dimensions");
}

// ---------------------------------------------------------------- PPM / PGM

int ppm_token(std::istream& in) {
  // Skips whitespace and '#' comments, then reads one unsigned decimal.
  for (;;) {
    int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      break;
    }
  }
  int value = -1;
  in >> value;
  return in ? value : -1;
}

Image load_ppm(std::ifstream& in, const std::string& path, ColorPolicy policy) {
  char magic[2] = {0, 0};
  in.read(magic, 2);
  const bool color = magic[1] == '6';
  if (magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6'))
    fail(Err::DecodeError, path + ": unsupported PNM variant (want P5/P6)");
  int w = ppm_token(in);
  int h = ppm_token(in);
  int maxval = ppm_token(in);
  if (maxval <= 0 || maxval > 65535) fail(Err::DecodeError, path + ": bad PNM header");
  check_dims(w, h, path);
  in.get();  // single whitespace before raster

  if (color && policy == ColorPolicy::RejectColor)
    fail(Err::DecodeError, path + ": color input rejected by policy");

  const int channels = color ? 3 : 1;
  const int bytes_per_sample = maxval > 255 ? 2 : 1;
  const size_t n = static_cast<size_t>(w) * h * channels * bytes_per_sample;
  std::vector<unsigned char> raw(n);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n));
  if (!in) fail(Err::DecodeError, path + ": truncated PNM raster");

  const double scale = 255.0 / maxval;
  Image img(w, h);
  size_t idx = 0;
  auto next_sample = [&]() -> double {
    double v;
    if (bytes_per_sample == 2) {
      v = static_cast<double>((raw[idx] << 8) | raw[idx + 1]);  // big-endian
      idx += 2;
    } else {
      v = static_cast<double>(raw[idx++]);
    }
    return v * scale;
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (color) {
        double r = next_sample(), g = next_sample(), b = next_sample();
        img.at(x, y) = clamp255(luma(r, g, b));
      } else {
        img.at(x, y) = clamp255(next_sample());
      }
    }
  }
  return img;
}

// ----------------------------------------------------------------------- BMP

uint32_t le32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}
uint16_t le16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

Image load_bmp(std::ifstream& in, const std::string& path, ColorPolicy policy) {
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 54 || bytes[0] != 'B' || bytes[1] != 'M')
    fail(Err::DecodeError, path + ": not a BMP file");
  uint32_t data_offset = le32(&bytes[10]);
  uint32_t header_size = le32(&bytes[14]);
  if (header_size < 40) fail(Err::DecodeError, path + ": unsupported BMP header");
  int32_t w = static_cast<int32_t>(le32(&bytes[18]));
  int32_t h = static_cast<int32_t>(le32(&bytes[22]));
  uint16_t bpp = le16(&bytes[28]);
  uint32_t compression = le32(&bytes[30]);
  if (compression != 0) fail(Err::DecodeError, path + ": compressed BMP unsupported");
  if (bpp != 8 && bpp != 24 && bpp != 32)
    fail(Err::DecodeError, path + ": unsupported BMP bit depth");
  bool bottom_up = h > 0;
  int height = std::abs(h);
  check_dims(w, height, path);

  // 8-bit files carry a palette right after the info header.
  std::vector<std::array<unsigned char, 3>> palette;
  if (bpp == 8) {
    uint32_t colors = le32(&bytes[46]);
    if (colors == 0) colors = 256;
    size_t pal_off = 14 + header_size;
    if (pal_off + colors * 4 > bytes.size()) fail(Err::DecodeError, path + ": truncated palette");
    palette.resize(colors);
    for (uint32_t i = 0; i < colors; ++i) {
      palette[i] = {bytes[pal_off + 4 * i + 2], bytes[pal_off + 4 * i + 1],
                    bytes[pal_off + 4 * i]};  // stored BGR
    }
  }

  const size_t row_bytes = ((static_cast<size_t>(w) * bpp + 31) / 32) * 4;
  if (data_offset + row_bytes * height > bytes.size())
    fail(Err::DecodeError, path + ": truncated BMP raster");

  Image img(w, height);
  bool saw_color = false;
  for (int y = 0; y < height; ++y) {
    int src_y = bottom_up ? height - 1 - y : y;
    const unsigned char* row = &bytes[data_offset + row_bytes * src_y];
    for (int x = 0; x < w; ++x) {
      double r, g, b;
      if (bpp == 8) {
        const auto& p = palette[row[x]];
        r = p[0];
        g = p[1];
        b = p[2];
      } else {
        const unsigned char* px = row + x * (bpp / 8);
        b = px[0];
        g = px[1];
        r = px[2];
      }
      if (r != g || g != b) saw_color = true;
      img.at(x, y) = clamp255(luma(r, g, b));
    }
  }
  if (saw_color && policy == ColorPolicy::RejectColor)
    fail(Err::DecodeError, path + ": color input rejected by policy");
  return img;
}

// ----------------------------------------------------------------------- PNG

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;
  FILE* fp = nullptr;
  ~PngReader() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    if (fp) std::fclose(fp);
  }
};

Image load_png(const std::string& path, ColorPolicy policy) {
  PngReader r;
  r.fp = std::fopen(path.c_str(), "rb");
  if (!r.fp) fail(Err::DecodeError, path + ": cannot open");
  r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  r.info = r.png ? png_create_info_struct(r.png) : nullptr;
  if (!r.png || !r.info) fail(Err::DecodeError, path + ": libpng init failed");
  if (setjmp(png_jmpbuf(r.png))) fail(Err::DecodeError, path + ": PNG decode failed");

  png_init_io(r.png, r.fp);
  png_read_info(r.png, r.info);

  png_uint_32 w, h;
  int bit_depth, color_type;
  png_get_IHDR(r.png, r.info, &w, &h, &bit_depth, &color_type, nullptr, nullptr, nullptr);
  check_dims(w, h, path);

  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(r.png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(r.png);
  if (png_get_valid(r.png, r.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(r.png);
  png_set_strip_alpha(r.png);
  if (bit_depth == 16) png_set_swap(r.png);  // native little-endian 16-bit reads
  png_read_update_info(r.png, r.info);

  png_get_IHDR(r.png, r.info, &w, &h, &bit_depth, &color_type, nullptr, nullptr, nullptr);
  const int channels = png_get_channels(r.png, r.info);
  const bool color = channels >= 3;
  if (color && policy == ColorPolicy::RejectColor)
    fail(Err::DecodeError, path + ": color input rejected by policy");

  const size_t row_bytes = png_get_rowbytes(r.png, r.info);
  std::vector<unsigned char> raster(row_bytes * h);
  std::vector<png_bytep> rows(h);
  for (png_uint_32 y = 0; y < h; ++y) rows[y] = raster.data() + y * row_bytes;
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);

  const double scale = bit_depth == 16 ? 255.0 / 65535.0 : 1.0;
  Image img(static_cast<int>(w), static_cast<int>(h));
  for (png_uint_32 y = 0; y < h; ++y) {
    const unsigned char* row = rows[y];
    for (png_uint_32 x = 0; x < w; ++x) {
      auto sample = [&](int c) -> double {
        if (bit_depth == 16) {
          const unsigned char* p = row + (x * channels + c) * 2;
          return (static_cast<double>(p[0]) + static_cast<double>(p[1]) * 256.0) * scale;
        }
        return static_cast<double>(row[x * channels + c]);
      };
      double v = color ? luma(sample(0), sample(1), sample(2)) : sample(0);
      img.at(static_cast<int>(x), static_cast<int>(y)) = clamp255(v);
    }
  }
  return img;
}

}  // namespace

Image load_image(const std::filesystem::path& path, ColorPolicy policy) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Err::DecodeError, path.string() + ": cannot open");
  unsigned char magic[8] = {0};
  in.read(reinterpret_cast<char*>(magic), 8);
  if (!in && in.gcount() < 2) fail(Err::DecodeError, path.string() + ": empty file");
  in.clear();
  in.seekg(0);

  static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
  if (std::memcmp(magic, png_sig, 8) == 0) {
    in.close();
    return load_png(path.string(), policy);
  }
  if (magic[0] == 'P' && (magic[1] == '5' || magic[1] == '6'))
    return load_ppm(in, path.string(), policy);
  if (magic[0] == 'B' && magic[1] == 'M') return load_bmp(in, path.string(), policy);
  fail(Err::DecodeError, path.string() + ": unrecognized image format");
}

void save_pgm(const std::filesystem::path& path, const Image& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Err::IoError, path.string() + ": cannot write");
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  std::vector<unsigned char> row(static_cast<size_t>(img.width));
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x)
      row[x] = static_cast<unsigned char>(std::clamp(std::llround(img.at(x, y)), 0ll, 255ll));
    out.write(reinterpret_cast<const char*>(row.data()), img.width);
  }
  if (!out) fail(Err::IoError, path.string() + ": write failed");
}

namespace {

struct Pattern {
  std::regex regex;
  bool u_first = false;  // capture order of {u} vs {v}
};

Pattern compile_layout(const std::string& layout) {
  size_t up = layout.find("{u}");
  size_t vp = layout.find("{v}");
  if (up == std::string::npos || vp == std::string::npos)
    fail(Err::ConfigError, "layout must contain {u} and {v}: " + layout);
  if (layout.find("{u}", up + 1) != std::string::npos ||
      layout.find("{v}", vp + 1) != std::string::npos)
    fail(Err::ConfigError, "layout placeholders may appear once: " + layout);

  std::string rx;
  for (size_t i = 0; i < layout.size();) {
    if (layout.compare(i, 3, "{u}") == 0 || layout.compare(i, 3, "{v}") == 0) {
      rx += "(\\d+)";
      i += 3;
    } else {
      char c = layout[i++];
      if (std::strchr("\\^$.|?*+()[]{}", c)) rx += '\\';
      rx += c;
    }
  }
  return Pattern{std::regex("^" + rx + "$"), up < vp};
}

}  // namespace

std::string format_view_name(const std::string& layout, int u, int v) {
  std::string out = layout;
  auto sub = [&](const std::string& key, int value) {
    size_t pos = out.find(key);
    out.replace(pos, key.size(), std::to_string(value));
  };
  sub("{u}", u);
  sub("{v}", v);
  return out;
}

LightField load_lightfield(const std::filesystem::path& dir, const std::string& layout,
                           ColorPolicy policy) {
  if (!std::filesystem::is_directory(dir))
    fail(Err::IoError, dir.string() + ": not a directory");
  Pattern pat = compile_layout(layout);

  std::map<std::pair<int, int>, std::filesystem::path> grid;  // (v, u) -> file
  int umin = 1 << 30, umax = -1, vmin = 1 << 30, vmax = -1;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::smatch m;
    std::string name = entry.path().filename().string();
    if (!std::regex_match(name, m, pat.regex)) continue;
    int a = std::stoi(m[1].str());
    int b = std::stoi(m[2].str());
    int u = pat.u_first ? a : b;
    int v = pat.u_first ? b : a;
    grid[{v, u}] = entry.path();
    umin = std::min(umin, u);
    umax = std::max(umax, u);
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  if (grid.empty()) fail(Err::MissingView, dir.string() + ": no files match " + layout);

  const int num_u = umax - umin + 1;
  const int num_v = vmax - vmin + 1;
  std::vector<Image> views;
  views.reserve(static_cast<size_t>(num_u) * num_v);
  for (int v = vmin; v <= vmax; ++v) {
    for (int u = umin; u <= umax; ++u) {
      auto it = grid.find({v, u});
      if (it == grid.end())
        fail(Err::MissingView, dir.string() + ": missing view (u=" + std::to_string(u) +
                                   ", v=" + std::to_string(v) + ")");
      views.push_back(load_image(it->second, policy));
    }
  }
  return make_lightfield(num_u, num_v, std::move(views));
}

void save_lightfield(const std::filesystem::path& dir, const LightField& lf,
                     const std::string& layout) {
  compile_layout(layout);  // validate placeholders
  std::filesystem::create_directories(dir);
  for (int v = 0; v < lf.num_v; ++v)
    for (int u = 0; u < lf.num_u; ++u)
      save_pgm(dir / format_view_name(layout, u, v), lf.view(u, v));
}

}  // namespace lfqa
