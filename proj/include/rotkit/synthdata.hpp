#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rotkit/angle.hpp"
#include "rotkit/geometry.hpp"

namespace rotkit {

// Synthetic scenes with an unambiguous upright orientation. Every style puts
// brighter content at the top, so the rotation angle is recoverable from the
// image alone.
enum class SceneStyle {
  kGradientHorizon,  // column-constant luminance ramp with a horizon step
  kTexturedHorizon,  // ramp plus seeded sky/ground texture
  kArrowMarker,      // upward arrow on a mild ramp
};

std::string_view style_name(SceneStyle s);
std::optional<SceneStyle> style_from_name(std::string_view name);

struct SceneSpec {
  uint64_t seed = 0;
  int size = 96;  // base image is size x size, grayscale
  SceneStyle style = SceneStyle::kGradientHorizon;
  double noise_std = 0.0;
};

struct Sample {
  RasterImage image;  // rotate_and_crop output
  Angle true_angle;
  uint64_t scene_seed = 0;
};

// Upright base image; bit-identical for identical specs.
RasterImage render_base(const SceneSpec& scene);

Sample make_sample(const SceneSpec& scene, Angle theta, int out_size);

// Batch sample images. The parallel path assigns one sample per loop
// iteration, so it is bit-identical to the serial path.
std::vector<RasterImage> make_sample_images(const std::vector<SceneSpec>& scenes,
                                            const std::vector<double>& angles_deg,
                                            int out_size, bool parallel = true);

enum class Split { kTrain, kVal, kTest };
std::string_view split_name(Split s);

struct ManifestEntry {
  std::string path;
  double angle_deg = 0.0;
  uint64_t scene_seed = 0;
};

struct Manifest {
  Split split = Split::kTrain;
  std::vector<ManifestEntry> entries;
};

struct DatasetConfig {
  int n_train = 0;  // train+val pool; val_fraction of it becomes the val split
  double val_fraction = 0.1;
  int n_test = 0;
  uint64_t split_seed = 0;
  uint64_t test_seed = 0;
  int base_size = 96;
  int out_size = 64;
  SceneStyle style = SceneStyle::kGradientHorizon;
  double noise_std = 0.0;
};

struct DatasetSplits {
  Manifest train, val, test;
};

// Scene seeds for all splits derive from split_seed, so changing only
// test_seed changes test angles but not test scenes. Validation angles are
// frozen by split_seed, test angles by test_seed. Train entries carry angle 0:
// the stored train image is the upright base and the trainer draws fresh
// rotations each epoch.
DatasetSplits build_splits(const DatasetConfig& cfg);

// CSV with header "path,angle_deg,scene_seed".
void write_manifest(const std::string& path, const Manifest& m);
Manifest read_manifest(const std::string& path, Split split);

// Materializes a dataset directory: PNG images per split, one manifest CSV
// per split, and dataset.json with the generation parameters.
void write_dataset(const std::string& dir, const DatasetConfig& cfg, bool parallel = true);
DatasetConfig read_dataset_config(const std::string& dir);

SceneSpec scene_from_entry(const DatasetConfig& cfg, const ManifestEntry& e);

}  // namespace rotkit
