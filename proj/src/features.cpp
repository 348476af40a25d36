#include "rotkit/features.hpp"

#include <cmath>
#include <stdexcept>

#include "rotkit/angle.hpp"

namespace rotkit {

namespace {

// Grayscale view of a pixel (channel mean for RGB).
inline double gray_at(const RasterImage& img, int x, int y) {
  if (img.channels == 1) return img.at(x, y);
  double s = 0.0;
  for (int c = 0; c < img.channels; ++c) s += img.at(x, y, c);
  return s / img.channels;
}

std::vector<double> raw_pixel_features(const RasterImage& img) {
  std::vector<double> f(static_cast<size_t>(img.width) * img.height);
  double mean = 0.0;
  size_t i = 0;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x, ++i) {
      f[i] = gray_at(img, x, y);
      mean += f[i];
    }
  }
  mean /= static_cast<double>(f.size());
  for (double& v : f) v -= mean;
  return f;
}

std::vector<double> grad_histogram_features(const FeatureExtractor& fx,
                                            const RasterImage& img) {
  const int grid = fx.cell_grid;
  const int bins = fx.orientation_bins;
  std::vector<double> f(static_cast<size_t>(grid) * grid * bins, 0.0);
  const double bin_width = 360.0 / bins;
  const double cell_w = static_cast<double>(img.width) / grid;
  const double cell_h = static_cast<double>(img.height) / grid;

  // Central differences on interior pixels; soft assignment to the two
  // nearest orientation bins, weighted by gradient magnitude.
  for (int y = 1; y < img.height - 1; ++y) {
    for (int x = 1; x < img.width - 1; ++x) {
      double gx = 0.5 * (gray_at(img, x + 1, y) - gray_at(img, x - 1, y));
      double gy = 0.5 * (gray_at(img, x, y + 1) - gray_at(img, x, y - 1));
      double mag = std::sqrt(gx * gx + gy * gy);
      if (mag <= 0.0) continue;
      double ori = normalize_degrees(rad_to_deg(std::atan2(-gy, gx)));
      double pos = ori / bin_width;
      int b0 = static_cast<int>(std::floor(pos)) % bins;
      int b1 = (b0 + 1) % bins;
      double frac = pos - std::floor(pos);
      int cx = std::min(grid - 1, static_cast<int>(x / cell_w));
      int cy = std::min(grid - 1, static_cast<int>(y / cell_h));
      size_t base = (static_cast<size_t>(cy) * grid + cx) * bins;
      f[base + b0] += mag * (1.0 - frac);
      f[base + b1] += mag * frac;
    }
  }

  for (int cell = 0; cell < grid * grid; ++cell) {
    size_t base = static_cast<size_t>(cell) * bins;
    double norm_sq = 0.0;
    for (int b = 0; b < bins; ++b) norm_sq += f[base + b] * f[base + b];
    if (norm_sq > 1e-24) {
      double inv = 1.0 / std::sqrt(norm_sq);
      for (int b = 0; b < bins; ++b) f[base + b] *= inv;
    }
  }
  return f;
}

}  // namespace

int FeatureExtractor::out_dim() const {
  switch (kind) {
    case Kind::kRawPixels: return image_size * image_size;
    case Kind::kGradHistogram: return cell_grid * cell_grid * orientation_bins;
  }
  throw std::logic_error("FeatureExtractor: unknown kind");
}

const char* feature_kind_name(FeatureExtractor::Kind k) {
  return k == FeatureExtractor::Kind::kRawPixels ? "raw_pixels" : "grad_hist";
}

bool feature_kind_from_name(const std::string& name, FeatureExtractor::Kind& out) {
  if (name == "raw_pixels") {
    out = FeatureExtractor::Kind::kRawPixels;
    return true;
  }
  if (name == "grad_hist") {
    out = FeatureExtractor::Kind::kGradHistogram;
    return true;
  }
  return false;
}

std::vector<double> extract_features(const FeatureExtractor& fx, const RasterImage& img) {
  img.check_shape();
  if (img.width != fx.image_size || img.height != fx.image_size) {
    throw std::invalid_argument("extract_features: image size does not match extractor");
  }
  switch (fx.kind) {
    case FeatureExtractor::Kind::kRawPixels: return raw_pixel_features(img);
    case FeatureExtractor::Kind::kGradHistogram: return grad_histogram_features(fx, img);
  }
  throw std::logic_error("FeatureExtractor: unknown kind");
}

FeatureMatrix extract_features_batch(const FeatureExtractor& fx,
                                     const std::vector<RasterImage>& images, bool parallel) {
  FeatureMatrix m;
  m.rows = static_cast<int>(images.size());
  m.cols = fx.out_dim();
  m.data.assign(static_cast<size_t>(m.rows) * m.cols, 0.0);
#pragma omp parallel for schedule(static) if (parallel)
  for (int i = 0; i < m.rows; ++i) {
    std::vector<double> f = extract_features(fx, images[i]);
    std::copy(f.begin(), f.end(), m.row(i));
  }
  return m;
}

}  // namespace rotkit
