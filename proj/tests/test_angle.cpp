#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rotkit/angle.hpp"
#include "rotkit/rng.hpp"

using namespace rotkit;

TEST_CASE("normalize_degrees canonicalizes") {
  CHECK(normalize_degrees(720.0) == doctest::Approx(0.0));
  CHECK(normalize_degrees(-1.0) == doctest::Approx(359.0));
  CHECK(normalize_degrees(45.5) == doctest::Approx(45.5));
  CHECK(normalize_degrees(360.0) == 0.0);
  CHECK(normalize_degrees(-360.0) == 0.0);
  CHECK(normalize_degrees(-1e-17) < 360.0);  // fmod rounding edge
}

TEST_CASE("normalize_degrees rejects non-finite input") {
  CHECK_THROWS_AS(normalize_degrees(std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
  CHECK_THROWS_AS(normalize_degrees(std::numeric_limits<double>::quiet_NaN()),
                  std::invalid_argument);
}

TEST_CASE("normalize is periodic and in range") {
  SplitMix64 rng(42);
  for (int i = 0; i < 500; ++i) {
    double x = (rng.next_double() - 0.5) * 2000.0;
    int k = static_cast<int>(rng.next() % 7) - 3;
    double a = normalize_degrees(x);
    double b = normalize_degrees(x + 360.0 * k);
    CHECK(a >= 0.0);
    CHECK(a < 360.0);
    CHECK(std::fabs(a - b) < 1e-9);
  }
}

TEST_CASE("circular distance examples") {
  CHECK(circular_distance_deg(359.0, 1.0) == doctest::Approx(2.0));
  CHECK(circular_distance_deg(0.0, 180.0) == doctest::Approx(180.0));
  CHECK(circular_distance_deg(10.0, 30.0) == doctest::Approx(20.0));
}

TEST_CASE("circular distance is symmetric and bounded") {
  SplitMix64 rng(7);
  for (int i = 0; i < 500; ++i) {
    double a = 360.0 * rng.next_double();
    double b = 360.0 * rng.next_double();
    double d = circular_distance_deg(a, b);
    CHECK(d == doctest::Approx(circular_distance_deg(b, a)));
    CHECK(d >= 0.0);
    CHECK(d <= 180.0);
  }
}

TEST_CASE("circular distance triangle inequality on a grid") {
  for (double a = 0.0; a < 360.0; a += 24.0) {
    for (double b = 0.0; b < 360.0; b += 24.0) {
      for (double c = 0.0; c < 360.0; c += 24.0) {
        double lhs = circular_distance_deg(a, c);
        double rhs = circular_distance_deg(a, b) + circular_distance_deg(b, c);
        CHECK(lhs <= rhs + 1e-12);
      }
    }
  }
}

TEST_CASE("angle_from_components quadrants") {
  CHECK(angle_from_components(0.0, 1.0).degrees() == doctest::Approx(0.0));
  CHECK(angle_from_components(1.0, 0.0).degrees() == doctest::Approx(90.0));
  double r = std::sqrt(2.0) / 2.0;
  CHECK(angle_from_components(-r, -r).degrees() == doctest::Approx(225.0));
  CHECK_THROWS_AS(angle_from_components(0.0, 0.0), std::domain_error);
}

TEST_CASE("angle_from_components inverts sin/cos on a fine grid") {
  for (int i = 0; i < 3600; ++i) {
    double theta = i * 0.1;
    double rad = deg_to_rad(theta);
    Angle got = angle_from_components(std::sin(rad), std::cos(rad));
    CHECK(circular_distance_deg(got.degrees(), theta) < 1e-9);
  }
}
