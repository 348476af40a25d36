#include "rotkit/codecs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rotkit {

namespace {

// Wraps a raw angular difference into (-180, 180]. 180 stays +180, which
// fixes the subgradient choice at the antipodal cusp.
double wrap_difference(double delta) {
  double w = std::fmod(delta, 360.0);
  if (w > 180.0) {
    w -= 360.0;
  } else if (w <= -180.0) {
    w += 360.0;
  }
  return w;
}

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void check_prediction(const CodecSpec& spec, std::span<const double> prediction) {
  if (static_cast<int>(prediction.size()) != spec.output_dim()) {
    throw std::invalid_argument("codec: prediction length does not match output_dim");
  }
  for (double v : prediction) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("codec: non-finite prediction component");
    }
  }
}

// Numerically stable log-softmax (max subtraction).
void log_softmax(std::span<const double> logits, std::vector<double>& out) {
  double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double z : logits) sum += std::exp(z - mx);
  double lse = mx + std::log(sum);
  out.resize(logits.size());
  for (size_t i = 0; i < logits.size(); ++i) out[i] = logits[i] - lse;
}

}  // namespace

CodecSpec CodecSpec::make(Method m) {
  CodecSpec spec;
  spec.method = m;
  return spec;
}

int CodecSpec::output_dim() const {
  switch (method) {
    case Method::kDirectAngle: return 1;
    case Method::kUnitVector: return 2;
    case Method::kPhaseShift: return psc_phases;
    case Method::kClassification: return bins;
    case Method::kCircularGaussian: return bins;
  }
  throw std::logic_error("codec: unknown method");
}

void CodecSpec::validate() const {
  if (naive_l1 && method != Method::kDirectAngle) {
    throw std::invalid_argument("codec: naive_l1 applies to the direct-angle method only");
  }
  switch (method) {
    case Method::kDirectAngle:
      break;
    case Method::kUnitVector:
      if (uv_lambda < 0.0 || !std::isfinite(uv_lambda)) {
        throw std::invalid_argument("codec: uv_lambda must be finite and >= 0");
      }
      break;
    case Method::kPhaseShift:
      if (psc_phases < 2) throw std::invalid_argument("codec: psc needs at least 2 phases");
      if (!(psc_frequency > 0.0)) throw std::invalid_argument("codec: psc frequency must be > 0");
      break;
    case Method::kClassification:
    case Method::kCircularGaussian:
      if (bins < 2) throw std::invalid_argument("codec: need at least 2 bins");
      if (method == Method::kCircularGaussian && !(cgd_sigma_deg > 0.0)) {
        throw std::invalid_argument("codec: cgd sigma must be > 0");
      }
      break;
  }
}

int CodecSpec::bin_of(double canonical_deg) const {
  int i = static_cast<int>(std::floor(canonical_deg / bin_width()));
  return std::clamp(i, 0, bins - 1);
}

std::vector<double> encode(const CodecSpec& spec, Angle theta) {
  spec.validate();
  const double deg = theta.degrees();
  switch (spec.method) {
    case Method::kDirectAngle:
      return {deg};
    case Method::kUnitVector:
      return {std::cos(theta.radians()), std::sin(theta.radians())};
    case Method::kPhaseShift: {
      std::vector<double> m(spec.psc_phases);
      const double base = spec.psc_frequency * theta.radians();
      for (int n = 0; n < spec.psc_phases; ++n) {
        m[n] = std::cos(base + 2.0 * kPi * n / spec.psc_phases);
      }
      return m;
    }
    case Method::kClassification: {
      std::vector<double> onehot(spec.bins, 0.0);
      onehot[spec.bin_of(deg)] = 1.0;
      return onehot;
    }
    case Method::kCircularGaussian: {
      std::vector<double> q(spec.bins);
      const double two_sigma_sq = 2.0 * spec.cgd_sigma_deg * spec.cgd_sigma_deg;
      double sum = 0.0;
      for (int i = 0; i < spec.bins; ++i) {
        double d = circular_distance_deg(spec.bin_center(i), deg);
        q[i] = std::exp(-d * d / two_sigma_sq);
        sum += q[i];
      }
      for (double& v : q) v /= sum;
      return q;
    }
  }
  throw std::logic_error("codec: unknown method");
}

Angle decode(const CodecSpec& spec, std::span<const double> prediction) {
  spec.validate();
  check_prediction(spec, prediction);
  switch (spec.method) {
    case Method::kDirectAngle:
      return Angle::from_degrees(prediction[0]);
    case Method::kUnitVector:
      // prediction = (cos part, sin part)
      return angle_from_components(prediction[1], prediction[0]);
    case Method::kPhaseShift: {
      double s_sin = 0.0, s_cos = 0.0;
      for (int n = 0; n < spec.psc_phases; ++n) {
        double phase = 2.0 * kPi * n / spec.psc_phases;
        s_sin += prediction[n] * std::sin(phase);
        s_cos += prediction[n] * std::cos(phase);
      }
      if (s_sin == 0.0 && s_cos == 0.0) {
        throw std::domain_error("psc decode: degenerate prediction (zero phase sums)");
      }
      double theta_rad = -std::atan2(s_sin, s_cos) / spec.psc_frequency;
      return Angle::from_degrees(rad_to_deg(theta_rad));
    }
    case Method::kClassification:
    case Method::kCircularGaussian: {
      auto it = std::max_element(prediction.begin(), prediction.end());
      int bin = static_cast<int>(std::distance(prediction.begin(), it));
      return Angle::from_degrees(spec.bin_center(bin));
    }
  }
  throw std::logic_error("codec: unknown method");
}

LossValue loss_and_grad(const CodecSpec& spec, std::span<const double> prediction,
                        std::span<const double> target) {
  spec.validate();
  check_prediction(spec, prediction);
  if (target.size() != prediction.size()) {
    throw std::invalid_argument("codec: target length does not match prediction");
  }

  LossValue out;
  out.gradient.assign(prediction.size(), 0.0);

  switch (spec.method) {
    case Method::kDirectAngle: {
      if (spec.naive_l1) {
        double d = prediction[0] - target[0];
        out.loss = std::fabs(d);
        out.gradient[0] = sign_of(d);
      } else {
        double w = wrap_difference(prediction[0] - target[0]);
        out.loss = std::fabs(w);
        out.gradient[0] = w == 180.0 ? 1.0 : sign_of(w);
      }
      return out;
    }
    case Method::kUnitVector: {
      double norm_sq = 0.0;
      for (size_t i = 0; i < 2; ++i) {
        double d = prediction[i] - target[i];
        out.loss += 0.5 * std::fabs(d);
        out.gradient[i] = 0.5 * sign_of(d);
        norm_sq += prediction[i] * prediction[i];
      }
      double norm = std::sqrt(norm_sq);
      out.loss += spec.uv_lambda * (norm - 1.0) * (norm - 1.0);
      if (norm > 0.0) {
        double coeff = 2.0 * spec.uv_lambda * (norm - 1.0) / norm;
        for (size_t i = 0; i < 2; ++i) out.gradient[i] += coeff * prediction[i];
      }
      // norm == 0: the penalty gradient is defined as 0 there.
      return out;
    }
    case Method::kPhaseShift: {
      double inv_m = 1.0 / spec.psc_phases;
      for (int n = 0; n < spec.psc_phases; ++n) {
        double d = prediction[n] - target[n];
        out.loss += inv_m * std::fabs(d);
        out.gradient[n] = inv_m * sign_of(d);
      }
      return out;
    }
    case Method::kClassification: {
      std::vector<double> logp;
      log_softmax(prediction, logp);
      for (int i = 0; i < spec.bins; ++i) {
        if (target[i] != 0.0) out.loss -= target[i] * logp[i];
        out.gradient[i] = std::exp(logp[i]) - target[i];
      }
      return out;
    }
    case Method::kCircularGaussian: {
      // KL(target || softmax(logits)); gradient w.r.t. logits is p - q.
      std::vector<double> logp;
      log_softmax(prediction, logp);
      for (int i = 0; i < spec.bins; ++i) {
        if (target[i] > 0.0) {
          out.loss += target[i] * (std::log(target[i]) - logp[i]);
        }
        out.gradient[i] = std::exp(logp[i]) - target[i];
      }
      if (out.loss < 0.0 && out.loss > -1e-12) out.loss = 0.0;  // rounding guard
      return out;
    }
  }
  throw std::logic_error("codec: unknown method");
}

std::string_view method_name(Method m) {
  switch (m) {
    case Method::kDirectAngle: return "da";
    case Method::kUnitVector: return "uv";
    case Method::kPhaseShift: return "psc";
    case Method::kClassification: return "cls";
    case Method::kCircularGaussian: return "cgd";
  }
  return "?";
}

std::optional<Method> method_from_name(std::string_view name) {
  for (Method m : all_methods()) {
    if (method_name(m) == name) return m;
  }
  return std::nullopt;
}

const std::array<Method, 5>& all_methods() {
  static const std::array<Method, 5> methods = {
      Method::kDirectAngle, Method::kUnitVector, Method::kPhaseShift,
      Method::kClassification, Method::kCircularGaussian};
  return methods;
}

}  // namespace rotkit
