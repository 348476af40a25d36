#pragma once

#include <cmath>

namespace rotkit {

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

// Canonical representative in [0, 360). Floored modulo, so negative inputs
// wrap upward. Throws std::invalid_argument on non-finite input.
double normalize_degrees(double raw);

// An orientation in degrees, always canonical.
class Angle {
 public:
  Angle() = default;
  static Angle from_degrees(double raw) { return Angle(normalize_degrees(raw)); }
  double degrees() const { return deg_; }
  double radians() const { return deg_to_rad(deg_); }

 private:
  explicit Angle(double canonical) : deg_(canonical) {}
  double deg_ = 0.0;
};

// Minimum angular separation, in [0, 180]. Inputs are normalized first.
double circular_distance_deg(double a, double b);

inline double circular_distance(Angle a, Angle b) {
  return circular_distance_deg(a.degrees(), b.degrees());
}

// Quadrant-correct angle recovery from sine/cosine parts.
// Rejects the zero vector with std::domain_error.
Angle angle_from_components(double sin_part, double cos_part);

}  // namespace rotkit
