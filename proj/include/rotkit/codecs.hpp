#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rotkit/angle.hpp"

namespace rotkit {

// The five circular-aware angle representations. Each one is a codec:
// encode(angle) -> training target, loss_and_grad(prediction, target),
// decode(prediction) -> angle.
enum class Method {
  kDirectAngle,       // "da"  - scalar angle, circular MAE loss
  kUnitVector,        // "uv"  - (cos, sin) with unit-norm penalty
  kPhaseShift,        // "psc" - M phase-shifted cosine components
  kClassification,    // "cls" - N-bin one-hot, softmax cross-entropy
  kCircularGaussian,  // "cgd" - circular Gaussian bin distribution, KL loss
};

struct CodecSpec {
  Method method = Method::kDirectAngle;

  double uv_lambda = 0.01;     // weight of the unit-norm penalty
  int psc_phases = 3;          // M
  double psc_frequency = 1.0;  // omega
  int bins = 360;              // N for cls/cgd
  double cgd_sigma_deg = 6.0;  // target distribution width

  // Direct-angle only: train with plain (non-circular) L1 instead of the
  // circular loss. Comparison arm for the boundary-failure demonstration.
  bool naive_l1 = false;

  static CodecSpec make(Method m);

  int output_dim() const;
  void validate() const;

  // Bin i covers [i*w, (i+1)*w) with w = 360/N; its center is (i + 0.5)*w.
  double bin_width() const { return 360.0 / bins; }
  double bin_center(int i) const { return (i + 0.5) * bin_width(); }
  int bin_of(double canonical_deg) const;
};

struct LossValue {
  double loss = 0.0;
  std::vector<double> gradient;  // d loss / d prediction
};

std::vector<double> encode(const CodecSpec& spec, Angle theta);
Angle decode(const CodecSpec& spec, std::span<const double> prediction);
LossValue loss_and_grad(const CodecSpec& spec, std::span<const double> prediction,
                        std::span<const double> target);

// Name registry used by the CLI and config files.
std::string_view method_name(Method m);
std::optional<Method> method_from_name(std::string_view name);
const std::array<Method, 5>& all_methods();

}  // namespace rotkit
