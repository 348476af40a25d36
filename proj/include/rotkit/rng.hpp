#pragma once

#include <cstdint>

namespace rotkit {

// SplitMix64 output mixing function (Steele, Lea & Flood). Used both as the
// generator step and for seed derivation, so every stream is a pure function
// of (seed, stream, index) and reproduces bit-identically on any platform.
uint64_t mix64(uint64_t x);

// Deterministic sub-seed for a named stream and element index. Parallel and
// serial generation agree because each element derives its own seed.
uint64_t derive_seed(uint64_t seed, uint64_t stream, uint64_t index);

class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next();
  double next_double();    // uniform [0, 1)
  double next_gaussian();  // standard normal, Box-Muller

 private:
  uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Stream tags. Arbitrary distinct constants; fixed forever for reproducibility.
namespace streams {
inline constexpr uint64_t kSceneSeed = 0x5363656e65ULL;    // scene identity
inline constexpr uint64_t kValAngle = 0x56616c416eULL;     // frozen val rotations
inline constexpr uint64_t kTestAngle = 0x546573416eULL;    // frozen test rotations
inline constexpr uint64_t kEpochAngle = 0x45706f4161ULL;   // per-epoch train rotations
inline constexpr uint64_t kShuffle = 0x53687566ULL;        // per-epoch sample order
inline constexpr uint64_t kNoise = 0x4e6f6973ULL;          // scene pixel noise
inline constexpr uint64_t kTexture = 0x54657874ULL;        // scene texture field
inline constexpr uint64_t kWeightInit = 0x57496e69ULL;     // head initialization
inline constexpr uint64_t kRun = 0x52756e21ULL;            // multi-run training seeds
}  // namespace streams

}  // namespace rotkit
