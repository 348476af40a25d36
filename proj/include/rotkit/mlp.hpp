#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace rotkit {

// Two-layer head: input -> hidden (ReLU) -> output. Weights are row-major,
// w1[j*in_dim + i] and w2[o*hidden_dim + j].
struct HeadParams {
  int in_dim = 0;
  int hidden_dim = 0;
  int out_dim = 0;
  uint64_t seed = 0;
  std::vector<double> w1, b1, w2, b2;

  // Uniform in [-a, a] with a = sqrt(6 / (fan_in + fan_out)); biases zero.
  static HeadParams init(int in_dim, int hidden_dim, int out_dim, uint64_t seed);

  size_t param_count() const;
};

struct ForwardCache {
  std::vector<double> hidden_pre;
  std::vector<double> hidden;
  std::vector<double> output;
};

void forward(const HeadParams& p, std::span<const double> x, ForwardCache& cache);
std::vector<double> forward(const HeadParams& p, std::span<const double> x);

struct ParamGrads {
  std::vector<double> w1, b1, w2, b2;

  static ParamGrads zeros_like(const HeadParams& p);
  void reset();
  void scale(double s);
};

// Accumulates exact chain-rule gradients into `grads`. `upstream` is
// d loss / d output from the codec loss.
void backward(const HeadParams& p, std::span<const double> x, const ForwardCache& cache,
              std::span<const double> upstream, ParamGrads& grads);

enum class OptimizerKind { kSgdMomentum, kAdamLike };

class Optimizer {
 public:
  Optimizer(OptimizerKind kind, double learning_rate, const HeadParams& shape);
  void step(HeadParams& params, const ParamGrads& grads);

 private:
  OptimizerKind kind_;
  double lr_;
  double momentum_ = 0.9;
  double beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
  long t_ = 0;
  std::vector<double> m_, v_;  // flat state over all tensors
};

}  // namespace rotkit
