#include "rotkit/angle.hpp"

#include <cmath>
#include <stdexcept>

namespace rotkit {

double normalize_degrees(double raw) {
  if (!std::isfinite(raw)) {
    throw std::invalid_argument("normalize_degrees: non-finite angle");
  }
  double m = std::fmod(raw, 360.0);
  if (m < 0.0) m += 360.0;
  if (m >= 360.0) m = 0.0;  // fmod rounding can land exactly on 360
  return m;
}

double circular_distance_deg(double a, double b) {
  double d = std::fabs(normalize_degrees(a) - normalize_degrees(b));
  return d > 180.0 ? 360.0 - d : d;
}

Angle angle_from_components(double sin_part, double cos_part) {
  if (!std::isfinite(sin_part) || !std::isfinite(cos_part)) {
    throw std::invalid_argument("angle_from_components: non-finite component");
  }
  if (sin_part == 0.0 && cos_part == 0.0) {
    throw std::domain_error("angle_from_components: zero vector has no direction");
  }
  return Angle::from_degrees(rad_to_deg(std::atan2(sin_part, cos_part)));
}

}  // namespace rotkit
