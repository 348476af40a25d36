#include "rotkit/mlp.hpp"

#include <cmath>
#include <stdexcept>

#include "rotkit/rng.hpp"

namespace rotkit {

namespace {

void check_span(std::span<const double> x, int expected, const char* what) {
  if (static_cast<int>(x.size()) != expected) {
    throw std::invalid_argument(std::string("mlp: bad length for ") + what);
  }
}

}  // namespace

HeadParams HeadParams::init(int in_dim, int hidden_dim, int out_dim, uint64_t seed) {
  if (in_dim <= 0 || hidden_dim <= 0 || out_dim <= 0) {
    throw std::invalid_argument("HeadParams: dimensions must be positive");
  }
  HeadParams p;
  p.in_dim = in_dim;
  p.hidden_dim = hidden_dim;
  p.out_dim = out_dim;
  p.seed = seed;
  p.w1.resize(static_cast<size_t>(hidden_dim) * in_dim);
  p.b1.assign(hidden_dim, 0.0);
  p.w2.resize(static_cast<size_t>(out_dim) * hidden_dim);
  p.b2.assign(out_dim, 0.0);

  SplitMix64 rng(derive_seed(seed, streams::kWeightInit, 0));
  auto fill_uniform = [&](std::vector<double>& w, int fan_in, int fan_out) {
    double a = std::sqrt(6.0 / (fan_in + fan_out));
    for (double& v : w) v = a * (2.0 * rng.next_double() - 1.0);
  };
  fill_uniform(p.w1, in_dim, hidden_dim);
  fill_uniform(p.w2, hidden_dim, out_dim);
  return p;
}

size_t HeadParams::param_count() const {
  return w1.size() + b1.size() + w2.size() + b2.size();
}

void forward(const HeadParams& p, std::span<const double> x, ForwardCache& cache) {
  check_span(x, p.in_dim, "input");
  cache.hidden_pre.assign(p.hidden_dim, 0.0);
  cache.hidden.assign(p.hidden_dim, 0.0);
  cache.output.assign(p.out_dim, 0.0);

  for (int j = 0; j < p.hidden_dim; ++j) {
    const double* row = p.w1.data() + static_cast<size_t>(j) * p.in_dim;
    double acc = p.b1[j];
    for (int i = 0; i < p.in_dim; ++i) acc += row[i] * x[i];
    cache.hidden_pre[j] = acc;
    cache.hidden[j] = acc > 0.0 ? acc : 0.0;
  }
  for (int o = 0; o < p.out_dim; ++o) {
    const double* row = p.w2.data() + static_cast<size_t>(o) * p.hidden_dim;
    double acc = p.b2[o];
    for (int j = 0; j < p.hidden_dim; ++j) acc += row[j] * cache.hidden[j];
    cache.output[o] = acc;
  }
}

std::vector<double> forward(const HeadParams& p, std::span<const double> x) {
  ForwardCache cache;
  forward(p, x, cache);
  return cache.output;
}

ParamGrads ParamGrads::zeros_like(const HeadParams& p) {
  ParamGrads g;
  g.w1.assign(p.w1.size(), 0.0);
  g.b1.assign(p.b1.size(), 0.0);
  g.w2.assign(p.w2.size(), 0.0);
  g.b2.assign(p.b2.size(), 0.0);
  return g;
}

void ParamGrads::reset() {
  std::fill(w1.begin(), w1.end(), 0.0);
  std::fill(b1.begin(), b1.end(), 0.0);
  std::fill(w2.begin(), w2.end(), 0.0);
  std::fill(b2.begin(), b2.end(), 0.0);
}

void ParamGrads::scale(double s) {
  for (double& v : w1) v *= s;
  for (double& v : b1) v *= s;
  for (double& v : w2) v *= s;
  for (double& v : b2) v *= s;
}

void backward(const HeadParams& p, std::span<const double> x, const ForwardCache& cache,
              std::span<const double> upstream, ParamGrads& grads) {
  check_span(x, p.in_dim, "input");
  check_span(upstream, p.out_dim, "upstream gradient");

  std::vector<double> d_hidden(p.hidden_dim, 0.0);
  for (int o = 0; o < p.out_dim; ++o) {
    const double u = upstream[o];
    grads.b2[o] += u;
    double* grow = grads.w2.data() + static_cast<size_t>(o) * p.hidden_dim;
    const double* wrow = p.w2.data() + static_cast<size_t>(o) * p.hidden_dim;
    if (u != 0.0) {
      for (int j = 0; j < p.hidden_dim; ++j) {
        grow[j] += u * cache.hidden[j];
        d_hidden[j] += u * wrow[j];
      }
    }
  }
  for (int j = 0; j < p.hidden_dim; ++j) {
    // ReLU subgradient: 0 at the kink.
    double dpre = cache.hidden_pre[j] > 0.0 ? d_hidden[j] : 0.0;
    if (dpre == 0.0) continue;
    grads.b1[j] += dpre;
    double* grow = grads.w1.data() + static_cast<size_t>(j) * p.in_dim;
    for (int i = 0; i < p.in_dim; ++i) grow[i] += dpre * x[i];
  }
}

Optimizer::Optimizer(OptimizerKind kind, double learning_rate, const HeadParams& shape)
    : kind_(kind), lr_(learning_rate) {
  size_t n = shape.param_count();
  m_.assign(n, 0.0);
  if (kind_ == OptimizerKind::kAdamLike) v_.assign(n, 0.0);
}

void Optimizer::step(HeadParams& params, const ParamGrads& grads) {
  std::vector<double>* tensors[4] = {&params.w1, &params.b1, &params.w2, &params.b2};
  const std::vector<double>* gtensors[4] = {&grads.w1, &grads.b1, &grads.w2, &grads.b2};

  size_t offset = 0;
  if (kind_ == OptimizerKind::kAdamLike) {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (int t = 0; t < 4; ++t) {
      auto& w = *tensors[t];
      const auto& g = *gtensors[t];
      for (size_t i = 0; i < w.size(); ++i) {
        size_t k = offset + i;
        m_[k] = beta1_ * m_[k] + (1.0 - beta1_) * g[i];
        v_[k] = beta2_ * v_[k] + (1.0 - beta2_) * g[i] * g[i];
        double m_hat = m_[k] / bc1;
        double v_hat = v_[k] / bc2;
        w[i] -= lr_ * m_hat / (std::sqrt(v_hat) + eps_);
      }
      offset += w.size();
    }
  } else {
    for (int t = 0; t < 4; ++t) {
      auto& w = *tensors[t];
      const auto& g = *gtensors[t];
      for (size_t i = 0; i < w.size(); ++i) {
        size_t k = offset + i;
        m_[k] = momentum_ * m_[k] - lr_ * g[i];
        w[i] += m_[k];
      }
      offset += w.size();
    }
  }
}

}  // namespace rotkit
