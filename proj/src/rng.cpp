#include "rotkit/rng.hpp"

#include <cmath>

namespace rotkit {

namespace {
constexpr uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
}

uint64_t mix64(uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

uint64_t derive_seed(uint64_t seed, uint64_t stream, uint64_t index) {
  uint64_t h = mix64(seed + kGamma);
  h = mix64(h ^ (stream + kGamma));
  return mix64(h + index * kGamma);
}

uint64_t SplitMix64::next() {
  state_ += kGamma;
  return mix64(state_);
}

double SplitMix64::next_double() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller. u1 in (0, 1] so the log is finite.
  double u1 = (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
  double u2 = next_double();
  double r = std::sqrt(-2.0 * std::log(u1));
  double phi = 2.0 * 3.14159265358979323846 * u2;
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

}  // namespace rotkit
