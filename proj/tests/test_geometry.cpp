#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "rotkit/geometry.hpp"
#include "rotkit/rng.hpp"

using namespace rotkit;

namespace {

RasterImage checker(int w, int h, int period = 8) {
  RasterImage img = RasterImage::make(w, h, 1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      img.at(x, y) = ((x / period + y / period) % 2) ? 0.75f : 0.25f;
    }
  }
  return img;
}

}  // namespace

TEST_CASE("rotation by zero is the identity") {
  RasterImage img = checker(100, 60);
  RasterImage out = rotate_image(img, Angle::from_degrees(0.0));
  REQUIRE(out.width == 100);
  REQUIRE(out.height == 60);
  CHECK(out.data == img.data);
}

TEST_CASE("quarter turn transposes content") {
  RasterImage img = checker(100, 50, 5);
  RasterImage out = rotate_image(img, Angle::from_degrees(90.0));
  REQUIRE(out.width == 50);
  REQUIRE(out.height == 100);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      CHECK(out.at(x, y) == doctest::Approx(img.at(img.width - 1 - y, x)).epsilon(1e-4));
    }
  }
}

TEST_CASE("rotating a constant field keeps interior pixels constant") {
  RasterImage img = RasterImage::make(80, 80, 1, 0.7f);
  RasterImage out = rotate_image(img, Angle::from_degrees(30.0));
  CropRect rect = largest_inscribed_rect(80, 80, Angle::from_degrees(30.0));
  int x0 = static_cast<int>(rect.center_x - rect.width / 2 + 3);
  int x1 = static_cast<int>(rect.center_x + rect.width / 2 - 3);
  int y0 = static_cast<int>(rect.center_y - rect.height / 2 + 3);
  int y1 = static_cast<int>(rect.center_y + rect.height / 2 - 3);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      CHECK(out.at(x, y) == doctest::Approx(0.7).epsilon(1e-6));
    }
  }
}

TEST_CASE("parallel rotation matches the serial reference bit for bit") {
  RasterImage img = checker(173, 131, 7);
  for (double deg : {0.0, 13.7, 45.0, 90.0, 211.4, 359.0}) {
    RasterImage a = rotate_image(img, Angle::from_degrees(deg));
    RasterImage b = rotate_image_serial(img, Angle::from_degrees(deg));
    CHECK(a.data == b.data);
  }
  RasterImage c = rotate_and_crop(img, Angle::from_degrees(77.7), 48);
  RasterImage d = rotate_and_crop_serial(img, Angle::from_degrees(77.7), 48);
  CHECK(c.data == d.data);
}

TEST_CASE("inscribed rectangle closed-form examples") {
  SUBCASE("no rotation keeps the full image") {
    CropRect r = largest_inscribed_rect(100, 100, Angle::from_degrees(0.0));
    CHECK(r.width == doctest::Approx(100.0));
    CHECK(r.height == doctest::Approx(100.0));
  }
  SUBCASE("square at 45 degrees keeps half the area") {
    CropRect r = largest_inscribed_rect(100, 100, Angle::from_degrees(45.0));
    CHECK(r.width == doctest::Approx(100.0 / std::sqrt(2.0)).epsilon(1e-9));
    CHECK(r.height == doctest::Approx(100.0 / std::sqrt(2.0)).epsilon(1e-9));
    CHECK(r.width * r.height / (100.0 * 100.0) == doctest::Approx(0.5).epsilon(1e-6));
  }
  SUBCASE("200x100 at 30 degrees matches brute force") {
    CropRect r = largest_inscribed_rect(200, 100, Angle::from_degrees(30.0));
    auto bf = oracles::brute_force_inscribed_rect(200, 100, 30.0);
    CHECK(std::fabs(r.width - bf.width) <= 1.0);
    CHECK(std::fabs(r.height - bf.height) <= 1.0);
  }
  SUBCASE("degenerate source rejected") {
    CHECK_THROWS_AS(largest_inscribed_rect(0, 100, Angle::from_degrees(10.0)),
                    std::invalid_argument);
  }
}

TEST_CASE("inscribed rectangle matches brute force on random shapes") {
  SplitMix64 rng(99);
  for (int i = 0; i < 50; ++i) {
    int w = 40 + static_cast<int>(rng.next() % 180);
    int h = 40 + static_cast<int>(rng.next() % 180);
    double theta = 360.0 * rng.next_double();
    CropRect r = largest_inscribed_rect(w, h, Angle::from_degrees(theta));
    auto bf = oracles::brute_force_inscribed_rect(w, h, theta);
    INFO("w=", w, " h=", h, " theta=", theta);
    CHECK(std::fabs(r.width - bf.width) <= 1.0);
    CHECK(std::fabs(r.height - bf.height) <= 1.0);
  }
}

TEST_CASE("inscribed rectangle symmetries") {
  SplitMix64 rng(5);
  for (int i = 0; i < 40; ++i) {
    int w = 50 + static_cast<int>(rng.next() % 150);
    int h = 50 + static_cast<int>(rng.next() % 150);
    double theta = 360.0 * rng.next_double();
    // Swapping the sides and adding a quarter turn reproduces the same
    // rotated footprint, so the inscribed rectangle is unchanged.
    CropRect base = largest_inscribed_rect(w, h, Angle::from_degrees(theta));
    CropRect quarter = largest_inscribed_rect(h, w, Angle::from_degrees(theta + 90.0));
    CHECK(base.width == doctest::Approx(quarter.width).epsilon(1e-9));
    CHECK(base.height == doctest::Approx(quarter.height).epsilon(1e-9));
    CropRect mirrored = largest_inscribed_rect(w, h, Angle::from_degrees(-theta));
    CHECK(base.width == doctest::Approx(mirrored.width).epsilon(1e-9));
    CHECK(base.height == doctest::Approx(mirrored.height).epsilon(1e-9));
  }
}

TEST_CASE("rotate_and_crop leaks no fill pixels on a 1 degree grid") {
  RasterImage ones = RasterImage::make(96, 96, 1, 1.0f);
  for (int deg = 0; deg < 360; ++deg) {
    RasterImage out = rotate_and_crop(ones, Angle::from_degrees(deg), 48);
    float mn = 1.0f;
    for (float v : out.data) mn = std::min(mn, v);
    INFO("theta ", deg);
    CHECK(mn > 0.99f);
  }
}

TEST_CASE("rotate_and_crop at zero equals an inset center crop") {
  RasterImage img = checker(90, 90, 9);
  RasterImage a = rotate_and_crop(img, Angle::from_degrees(0.0), 64);
  CropRect rect;
  rect.center_x = 45.0;
  rect.center_y = 45.0;
  rect.width = 90.0 - 2.0 * kCropMarginPx;
  rect.height = 90.0 - 2.0 * kCropMarginPx;
  RasterImage b = crop_resize(img, rect, 64, 64);
  CHECK(a.data == b.data);
}

TEST_CASE("rotate_and_crop is invariant to full turns") {
  RasterImage img = checker(96, 96);
  RasterImage a = rotate_and_crop(img, Angle::from_degrees(33.0), 64);
  RasterImage b = rotate_and_crop(img, Angle::from_degrees(393.0), 64);
  CHECK(a.data == b.data);
}

TEST_CASE("rotate_and_crop rejects degenerate outputs") {
  RasterImage tiny = RasterImage::make(8, 8, 1, 0.5f);
  CHECK_THROWS_AS(rotate_and_crop(tiny, Angle::from_degrees(45.0), 16),
                  std::invalid_argument);
  RasterImage img = checker(64, 64);
  CHECK_THROWS_AS(rotate_and_crop(img, Angle::from_degrees(10.0), 0), std::invalid_argument);
}

TEST_CASE("resize_bilinear preserves a constant field") {
  RasterImage img = RasterImage::make(31, 17, 3, 0.42f);
  RasterImage out = resize_bilinear(img, 64, 64);
  REQUIRE(out.width == 64);
  for (float v : out.data) CHECK(v == doctest::Approx(0.42f).epsilon(1e-6));
}
