#include "rotkit/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rotkit/rng.hpp"

namespace rotkit {

namespace {

std::vector<SceneSpec> scenes_of(const Manifest& m, const DatasetConfig& cfg) {
  std::vector<SceneSpec> scenes;
  scenes.reserve(m.entries.size());
  for (const auto& e : m.entries) scenes.push_back(scene_from_entry(cfg, e));
  return scenes;
}

std::vector<double> angles_of(const Manifest& m) {
  std::vector<double> a;
  a.reserve(m.entries.size());
  for (const auto& e : m.entries) a.push_back(e.angle_deg);
  return a;
}

void check_finite_output(const std::vector<double>& output, int epoch) {
  for (double v : output) {
    if (!std::isfinite(v)) {
      char msg[120];
      std::snprintf(msg, sizeof(msg), "train: diverged at epoch %d (non-finite model output)",
                    epoch);
      throw std::runtime_error(msg);
    }
  }
}

double validation_mae(const CodecSpec& codec, const HeadParams& params,
                      const FeatureMatrix& feats, const std::vector<double>& truths,
                      int epoch) {
  ForwardCache cache;
  double sum = 0.0;
  for (int i = 0; i < feats.rows; ++i) {
    forward(params, std::span<const double>(feats.row(i), feats.cols), cache);
    check_finite_output(cache.output, epoch);
    Angle pred = decode(codec, cache.output);
    sum += circular_distance_deg(pred.degrees(), truths[i]);
  }
  return sum / feats.rows;
}

void shuffle_indices(std::vector<int>& idx, SplitMix64& rng) {
  for (size_t i = idx.size(); i > 1; --i) {
    size_t j = static_cast<size_t>(rng.next() % i);
    std::swap(idx[i - 1], idx[j]);
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0) || batch_size <= 0 || max_epochs <= 0 || patience <= 0 ||
      hidden_dim <= 0) {
    throw std::invalid_argument("TrainConfig: all quantities must be positive");
  }
  if (patience > max_epochs) {
    throw std::invalid_argument("TrainConfig: patience must not exceed max_epochs");
  }
}

TrainResult train(const CodecSpec& codec, const FeatureExtractor& fx,
                  const Manifest& train_manifest, const Manifest& val_manifest,
                  const DatasetConfig& data_cfg, const TrainConfig& cfg) {
  codec.validate();
  cfg.validate();
  if (train_manifest.entries.empty() || val_manifest.entries.empty()) {
    throw std::invalid_argument("train: empty manifest");
  }
  if (fx.image_size != data_cfg.out_size) {
    throw std::invalid_argument("train: extractor image size does not match dataset");
  }

  const auto train_scenes = scenes_of(train_manifest, data_cfg);
  const auto val_scenes = scenes_of(val_manifest, data_cfg);
  const auto val_angles = angles_of(val_manifest);

  // Validation rotations are frozen, so their features are computed once.
  FeatureMatrix val_feats = extract_features_batch(
      fx, make_sample_images(val_scenes, val_angles, data_cfg.out_size), true);

  TrainResult result;
  HeadParams params = HeadParams::init(fx.out_dim(), cfg.hidden_dim, codec.output_dim(),
                                       cfg.seed);
  Optimizer opt(cfg.optimizer, cfg.learning_rate, params);

  double best_val = validation_mae(codec, params, val_feats, val_angles, 0);
  result.params = params;
  result.best_epoch = 0;
  result.log.push_back({0, std::numeric_limits<double>::quiet_NaN(), best_val});

  const int n_train = static_cast<int>(train_scenes.size());
  std::vector<int> order(n_train);
  std::iota(order.begin(), order.end(), 0);

  ParamGrads grads = ParamGrads::zeros_like(params);
  ForwardCache cache;

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    // Fresh rotation for every train sample this epoch, by index, so the
    // draw does not depend on iteration order.
    std::vector<double> epoch_angles(n_train);
    SplitMix64 angle_rng(derive_seed(cfg.seed, streams::kEpochAngle, epoch));
    for (int i = 0; i < n_train; ++i) epoch_angles[i] = 360.0 * angle_rng.next_double();

    SplitMix64 shuffle_rng(derive_seed(cfg.seed, streams::kShuffle, epoch));
    shuffle_indices(order, shuffle_rng);

    double epoch_loss = 0.0;
    for (int start = 0; start < n_train; start += cfg.batch_size) {
      const int count = std::min(cfg.batch_size, n_train - start);

      std::vector<SceneSpec> batch_scenes(count);
      std::vector<double> batch_angles(count);
      for (int b = 0; b < count; ++b) {
        int idx = order[start + b];
        batch_scenes[b] = train_scenes[idx];
        batch_angles[b] = epoch_angles[idx];
      }
      auto batch_images = make_sample_images(batch_scenes, batch_angles, data_cfg.out_size);
      FeatureMatrix feats = extract_features_batch(fx, batch_images);

      grads.reset();
      for (int b = 0; b < count; ++b) {
        std::span<const double> x(feats.row(b), feats.cols);
        forward(params, x, cache);
        check_finite_output(cache.output, epoch);
        auto target = encode(codec, Angle::from_degrees(batch_angles[b]));
        LossValue lv = loss_and_grad(codec, cache.output, target);
        epoch_loss += lv.loss;
        backward(params, x, cache, lv.gradient, grads);
      }
      grads.scale(1.0 / count);
      opt.step(params, grads);
    }
    epoch_loss /= n_train;

    double val_mae = validation_mae(codec, params, val_feats, val_angles, epoch);
    if (!std::isfinite(epoch_loss) || !std::isfinite(val_mae)) {
      char msg[160];
      std::snprintf(msg, sizeof(msg),
                    "train: diverged at epoch %d (train loss %g, val MAE %g)", epoch,
                    epoch_loss, val_mae);
      throw std::runtime_error(msg);
    }
    result.log.push_back({epoch, epoch_loss, val_mae});

    if (val_mae < best_val) {
      best_val = val_mae;
      result.best_epoch = epoch;
      result.params = params;
    } else if (epoch - result.best_epoch >= cfg.patience) {
      break;
    }
  }

  result.best_val_mae = best_val;
  return result;
}

Angle predict(const CodecSpec& codec, const FeatureExtractor& fx, const HeadParams& params,
              const RasterImage& img) {
  auto features = extract_features(fx, img);
  return decode(codec, forward(params, features));
}

EvalResult evaluate_model(const CodecSpec& codec, const FeatureExtractor& fx,
                          const HeadParams& params, const Manifest& manifest,
                          const DatasetConfig& data_cfg) {
  if (manifest.entries.empty()) throw std::invalid_argument("evaluate_model: empty manifest");
  const auto scenes = scenes_of(manifest, data_cfg);
  const auto truths = angles_of(manifest);
  FeatureMatrix feats = extract_features_batch(
      fx, make_sample_images(scenes, truths, data_cfg.out_size), true);

  EvalResult out;
  out.truths_deg = truths;
  out.predictions_deg.resize(truths.size());
  ForwardCache cache;
  for (int i = 0; i < feats.rows; ++i) {
    forward(params, std::span<const double>(feats.row(i), feats.cols), cache);
    out.predictions_deg[i] = decode(codec, cache.output).degrees();
  }
  out.report = evaluate(out.predictions_deg, out.truths_deg);
  return out;
}

void write_training_log(const std::string& path, const std::vector<EpochRecord>& log) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("write_training_log: cannot open " + path);
  f << "epoch,train_loss,val_mae\n";
  char buf[160];
  for (const auto& rec : log) {
    std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g\n", rec.epoch, rec.train_loss, rec.val_mae);
    f << buf;
  }
}

}  // namespace rotkit
