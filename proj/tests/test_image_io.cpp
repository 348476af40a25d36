#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "rotkit/image_io.hpp"
#include "rotkit/rng.hpp"

using namespace rotkit;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const char* name) {
  fs::path dir = fs::temp_directory_path() / "rotkit_io_test";
  fs::create_directories(dir);
  return dir / name;
}

RasterImage random_image(int w, int h, int c, uint64_t seed) {
  RasterImage img = RasterImage::make(w, h, c);
  SplitMix64 rng(seed);
  for (float& v : img.data) v = static_cast<float>(rng.next_double());
  return img;
}

}  // namespace

TEST_CASE("png round trip stays within quantization error") {
  for (int channels : {1, 3}) {
    RasterImage img = random_image(37, 23, channels, 99);
    fs::path p = temp_file("roundtrip.png");
    write_png(p.string(), img);
    RasterImage back = read_png(p.string());
    REQUIRE(back.width == img.width);
    REQUIRE(back.height == img.height);
    REQUIRE(back.channels == img.channels);
    for (size_t i = 0; i < img.data.size(); ++i) {
      CHECK(std::fabs(back.data[i] - img.data[i]) <= 0.5f / 255.0f + 1e-6f);
    }
  }
}

TEST_CASE("png is exact on representable levels") {
  RasterImage img = RasterImage::make(16, 16, 1);
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 16; ++x) img.at(x, y) = static_cast<float>((y * 16 + x) / 255.0);
  }
  fs::path p = temp_file("levels.png");
  write_png(p.string(), img);
  RasterImage back = read_png(p.string());
  CHECK(back.data == img.data);
}

TEST_CASE("png writer is deterministic") {
  RasterImage img = random_image(40, 40, 1, 5);
  fs::path p1 = temp_file("det1.png");
  fs::path p2 = temp_file("det2.png");
  write_png(p1.string(), img);
  write_png(p2.string(), img);
  std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
  std::string a((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
  std::string b((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
  CHECK(a == b);
}

TEST_CASE("png reader rejects garbage") {
  fs::path p = temp_file("garbage.png");
  std::ofstream f(p, std::ios::binary);
  f << "definitely not a png";
  f.close();
  CHECK_THROWS_AS(read_png(p.string()), std::runtime_error);
  CHECK_THROWS_AS(read_png("/nonexistent/nope.png"), std::runtime_error);
}

TEST_CASE("raw float format is lossless") {
  RasterImage img = random_image(19, 31, 3, 1234);
  fs::path p = temp_file("img.rawf");
  write_raw_float(p.string(), img);
  RasterImage back = read_raw_float(p.string());
  CHECK(back.width == img.width);
  CHECK(back.height == img.height);
  CHECK(back.channels == img.channels);
  CHECK(back.data == img.data);
}

TEST_CASE("raw float reader validates the header") {
  fs::path p = temp_file("bad.rawf");
  std::ofstream f(p, std::ios::binary);
  f << "0 -3 2\n";
  f.close();
  CHECK_THROWS_AS(read_raw_float(p.string()), std::runtime_error);
}
