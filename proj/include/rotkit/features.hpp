#pragma once

#include <string>
#include <vector>

#include "rotkit/geometry.hpp"

namespace rotkit {

// Deterministic feature extractors standing in for a learned backbone.
struct FeatureExtractor {
  enum class Kind {
    kRawPixels,      // flattened grayscale, mean-subtracted
    kGradHistogram,  // per-cell soft histograms of gradient orientation (360 deg support)
  };

  Kind kind = Kind::kGradHistogram;
  int image_size = 64;     // expected square input size
  int cell_grid = 4;       // kGradHistogram: cells per side
  int orientation_bins = 16;

  int out_dim() const;
};

const char* feature_kind_name(FeatureExtractor::Kind k);
bool feature_kind_from_name(const std::string& name, FeatureExtractor::Kind& out);

std::vector<double> extract_features(const FeatureExtractor& fx, const RasterImage& img);

struct FeatureMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;  // row-major

  double* row(int i) { return data.data() + static_cast<size_t>(i) * cols; }
  const double* row(int i) const { return data.data() + static_cast<size_t>(i) * cols; }
};

// Each image fills its own row, so the parallel path matches the serial one.
FeatureMatrix extract_features_batch(const FeatureExtractor& fx,
                                     const std::vector<RasterImage>& images,
                                     bool parallel = true);

}  // namespace rotkit
