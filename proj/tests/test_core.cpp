#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <png.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "lfqa/image.hpp"
#include "lfqa/image_io.hpp"
#include "lfqa/lightfield.hpp"
#include "lfqa/rng.hpp"

using namespace lfqa;
namespace fs = std::filesystem;

namespace {

Image noise_image(int w, int h, uint64_t seed) {
  Rng rng(seed);
  Image img(w, h);
  for (double& v : img.data) v = std::floor(256.0 * rng.next_double());
  return img;
}

fs::path temp_dir(const char* tag) {
  fs::path dir = fs::temp_directory_path() / (std::string("lfqa_core_") + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_png_gray(const fs::path& path, const Image& img) {
  FILE* fp = std::fopen(path.c_str(), "wb");
  REQUIRE(fp != nullptr);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  REQUIRE(setjmp(png_jmpbuf(png)) == 0);
  png_init_io(png, fp);
  png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<unsigned char> row(static_cast<size_t>(img.width));
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) row[x] = static_cast<unsigned char>(img.at(x, y));
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

}  // namespace

TEST_CASE("luma weights") {
  CHECK(luma(255, 255, 255) == doctest::Approx(255.0).epsilon(1e-12));
  CHECK(luma(0, 0, 0) == 0.0);
  CHECK(luma(255, 0, 0) == doctest::Approx(76.245).epsilon(1e-12));
}

TEST_CASE("downsample2 dimensions and means") {
  Image img = noise_image(64, 64, 1);
  Image half = downsample2(img);
  CHECK(half.width == 32);
  CHECK(half.height == 32);
  CHECK(half.mean() == doctest::Approx(img.mean()).epsilon(1e-12));

  Image odd = noise_image(65, 65, 2);
  Image h2 = downsample2(odd);
  CHECK(h2.width == 32);
  CHECK(h2.height == 32);

  Image flat(10, 8, 42.5);
  Image hf = downsample2(flat);
  for (double v : hf.data) CHECK(v == 42.5);

  CHECK_THROWS_AS(downsample2(Image(1, 5)), Error);
}

TEST_CASE("lightfield construction and EPI extraction") {
  const int U = 5, V = 5, S = 64, T = 48;
  std::vector<Image> views;
  for (int v = 0; v < V; ++v)
    for (int u = 0; u < U; ++u) views.push_back(noise_image(S, T, 100 + v * U + u));
  LightField lf = make_lightfield(U, V, views);

  auto horizontal = extract_epis(lf, EpiOrientation::Horizontal);
  CHECK(horizontal.size() == static_cast<size_t>(V * T));  // 240 slices
  CHECK(horizontal[0].angular_extent() == U);
  CHECK(horizontal[0].spatial_extent() == S);

  auto vertical = extract_epis(lf, EpiOrientation::Vertical);
  CHECK(vertical.size() == static_cast<size_t>(U * S));

  // Pixel identity: slice (a, s) equals the 4-D sample it came from, and
  // re-indexing the slices reconstructs L(u,v,s,t) at every coordinate.
  for (const EpiSlice& e : horizontal)
    for (int u = 0; u < U; ++u)
      for (int s = 0; s < S; ++s)
        REQUIRE(e.at(u, s) == lf.sample(u, e.fixed_angular, s, e.fixed_spatial));
  for (const EpiSlice& e : vertical)
    for (int v = 0; v < V; ++v)
      for (int t = 0; t < T; ++t)
        REQUIRE(e.at(v, t) == lf.sample(e.fixed_angular, v, e.fixed_spatial, t));
}

TEST_CASE("degenerate orientations") {
  std::vector<Image> row;
  for (int u = 0; u < 7; ++u) row.push_back(noise_image(16, 12, 7 + u));
  LightField lf = make_lightfield(7, 1, row);
  CHECK_THROWS_AS(extract_epis(lf, EpiOrientation::Vertical), Error);
  CHECK_NOTHROW(extract_epis(lf, EpiOrientation::Horizontal));
  CHECK(!orientation_usable(lf, EpiOrientation::Vertical));
}

TEST_CASE("view size mismatch rejected") {
  std::vector<Image> views = {noise_image(8, 8, 1), noise_image(8, 9, 2)};
  CHECK_THROWS_AS(make_lightfield(2, 1, views), Error);
}

TEST_CASE("pgm round trip") {
  fs::path dir = temp_dir("pgm");
  Image img = noise_image(20, 14, 3);
  save_pgm(dir / "a.pgm", img);
  Image back = load_image(dir / "a.pgm");
  REQUIRE(back.width == img.width);
  REQUIRE(back.height == img.height);
  for (size_t i = 0; i < img.data.size(); ++i) REQUIRE(back.data[i] == img.data[i]);
}

TEST_CASE("ppm color and 16-bit decode") {
  fs::path dir = temp_dir("ppm");
  {
    std::ofstream out(dir / "c.ppm", std::ios::binary);
    out << "P6\n# comment\n2 1\n255\n";
    unsigned char px[6] = {255, 0, 0, 0, 255, 0};
    out.write(reinterpret_cast<char*>(px), 6);
  }
  Image img = load_image(dir / "c.ppm");
  CHECK(img.at(0, 0) == doctest::Approx(76.245).epsilon(1e-12));
  CHECK(img.at(1, 0) == doctest::Approx(0.587 * 255).epsilon(1e-12));
  CHECK_THROWS_AS(load_image(dir / "c.ppm", ColorPolicy::RejectColor), Error);

  {
    std::ofstream out(dir / "g16.pgm", std::ios::binary);
    out << "P5\n2 1\n1023\n";  // 10-bit source
    unsigned char px[4] = {0x03, 0xff, 0x00, 0x00};
    out.write(reinterpret_cast<char*>(px), 4);
  }
  Image g = load_image(dir / "g16.pgm");
  CHECK(g.at(0, 0) == doctest::Approx(255.0).epsilon(1e-12));
  CHECK(g.at(1, 0) == 0.0);
}

TEST_CASE("bmp decode") {
  fs::path dir = temp_dir("bmp");
  // 2x2 bottom-up 24-bit BMP, rows padded to 8 bytes.
  const unsigned char bmp[] = {
      'B',  'M',  70, 0, 0, 0, 0, 0, 0, 0, 54, 0, 0, 0,  // file header
      40,   0,    0,  0, 2, 0, 0, 0, 2, 0, 0,  0,         // info: 2x2
      1,    0,    24, 0, 0, 0, 0, 0, 16, 0, 0, 0,
      0,    0,    0,  0, 0, 0, 0, 0, 0, 0, 0,  0, 0, 0, 0, 0,
      // bottom row: blue, green (BGR order), then padding
      255,  0,    0,  0, 255, 0, 0, 0,
      // top row: red, white
      0,    0,    255, 255, 255, 255, 0, 0};
  std::ofstream(dir / "t.bmp", std::ios::binary)
      .write(reinterpret_cast<const char*>(bmp), sizeof(bmp));
  Image img = load_image(dir / "t.bmp");
  REQUIRE(img.width == 2);
  REQUIRE(img.height == 2);
  CHECK(img.at(0, 0) == doctest::Approx(0.299 * 255).epsilon(1e-12));  // red (top-left)
  CHECK(img.at(1, 0) == doctest::Approx(255.0).epsilon(1e-12));        // white
  CHECK(img.at(0, 1) == doctest::Approx(0.114 * 255).epsilon(1e-12));  // blue
  CHECK(img.at(1, 1) == doctest::Approx(0.587 * 255).epsilon(1e-12));  // green
}

TEST_CASE("png decode") {
  fs::path dir = temp_dir("png");
  Image img = noise_image(9, 7, 5);
  write_png_gray(dir / "g.png", img);
  Image back = load_image(dir / "g.png");
  REQUIRE(back.width == 9);
  for (size_t i = 0; i < img.data.size(); ++i) REQUIRE(back.data[i] == img.data[i]);
}

TEST_CASE("grid loading: 9x9, gaps, one-row layouts") {
  fs::path dir = temp_dir("grid");
  for (int v = 1; v <= 9; ++v)
    for (int u = 1; u <= 9; ++u)
      save_pgm(dir / ("r" + std::to_string(v) + "_c" + std::to_string(u) + ".pgm"),
               noise_image(12, 10, static_cast<uint64_t>(v * 16 + u)));

  LightField lf = load_lightfield(dir, "r{v}_c{u}.pgm");
  CHECK(lf.num_u == 9);
  CHECK(lf.num_v == 9);  // 1-based indices normalize

  // Determinism: loading twice gives bit-identical data.
  LightField lf2 = load_lightfield(dir, "r{v}_c{u}.pgm");
  for (size_t i = 0; i < lf.views.size(); ++i) REQUIRE(lf.views[i].data == lf2.views[i].data);

  fs::remove(dir / "r4_c4.pgm");
  try {
    load_lightfield(dir, "r{v}_c{u}.pgm");
    FAIL("expected MissingView");
  } catch (const Error& e) {
    CHECK(e.code() == Err::MissingView);
    CHECK(std::string(e.what()).find("u=4") != std::string::npos);
  }

  fs::path row_dir = temp_dir("grid_row");
  for (int u = 0; u < 7; ++u)
    save_pgm(row_dir / ("r0_c" + std::to_string(u) + ".pgm"), noise_image(12, 10, 50 + u));
  LightField row = load_lightfield(row_dir, "r{v}_c{u}.pgm");
  CHECK(row.num_u == 7);
  CHECK(row.num_v == 1);
}

TEST_CASE("grid loading error cases") {
  fs::path dir = temp_dir("grid_err");
  save_pgm(dir / "r0_c0.pgm", noise_image(8, 8, 1));
  save_pgm(dir / "r0_c1.pgm", noise_image(9, 8, 2));
  CHECK_THROWS_AS(load_lightfield(dir, "r{v}_c{u}.pgm"), Error);  // DimensionMismatch

  fs::path dir2 = temp_dir("grid_err2");
  std::ofstream(dir2 / "r0_c0.pgm") << "not an image";
  try {
    load_lightfield(dir2, "r{v}_c{u}.pgm");
    FAIL("expected DecodeError");
  } catch (const Error& e) {
    CHECK(e.code() == Err::DecodeError);
  }

  CHECK_THROWS_AS(load_lightfield(dir2, "r{v}.pgm"), Error);  // missing {u}
}

TEST_CASE("save_lightfield round trip") {
  std::vector<Image> views;
  for (int i = 0; i < 6; ++i) views.push_back(noise_image(10, 8, 60 + i));
  LightField lf = make_lightfield(3, 2, views);
  fs::path dir = temp_dir("save");
  save_lightfield(dir, lf, "v{v}_u{u}.pgm");
  LightField back = load_lightfield(dir, "v{v}_u{u}.pgm");
  REQUIRE(back.num_u == 3);
  REQUIRE(back.num_v == 2);
  for (size_t i = 0; i < lf.views.size(); ++i) REQUIRE(back.views[i].data == lf.views[i].data);
}
