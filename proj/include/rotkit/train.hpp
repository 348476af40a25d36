#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rotkit/codecs.hpp"
#include "rotkit/features.hpp"
#include "rotkit/metrics.hpp"
#include "rotkit/mlp.hpp"
#include "rotkit/synthdata.hpp"

namespace rotkit {

struct TrainConfig {
  double learning_rate = 1e-3;
  int batch_size = 32;
  int max_epochs = 60;
  int patience = 15;  // epochs without val improvement before stopping
  OptimizerKind optimizer = OptimizerKind::kAdamLike;
  uint64_t seed = 0;
  int hidden_dim = 128;

  void validate() const;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;  // NaN for the pre-training row (epoch 0)
  double val_mae = 0.0;
};

struct TrainResult {
  HeadParams params;  // parameters with the best validation MAE
  std::vector<EpochRecord> log;
  int best_epoch = 0;
  double best_val_mae = 0.0;
};

// Mini-batch training of the codec head. Fresh rotation per train sample per
// epoch (seeded); validation rotations come frozen from the manifest.
// Deterministic: identical seeds give bit-identical logs and parameters.
// Throws std::runtime_error with a diagnostic if the loss goes non-finite.
TrainResult train(const CodecSpec& codec, const FeatureExtractor& fx,
                  const Manifest& train_manifest, const Manifest& val_manifest,
                  const DatasetConfig& data_cfg, const TrainConfig& cfg);

Angle predict(const CodecSpec& codec, const FeatureExtractor& fx, const HeadParams& params,
              const RasterImage& img);

struct EvalResult {
  MetricsReport report;
  std::vector<double> truths_deg;
  std::vector<double> predictions_deg;
};

EvalResult evaluate_model(const CodecSpec& codec, const FeatureExtractor& fx,
                          const HeadParams& params, const Manifest& manifest,
                          const DatasetConfig& data_cfg);

void write_training_log(const std::string& path, const std::vector<EpochRecord>& log);

}  // namespace rotkit
