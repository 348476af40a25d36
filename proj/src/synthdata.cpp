#include "rotkit/synthdata.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "rotkit/image_io.hpp"
#include "rotkit/rng.hpp"

namespace fs = std::filesystem;

namespace rotkit {

namespace {

// Smooth seeded 2-D value noise in [0, 1]: hashed lattice values, bilinear.
double value_noise(uint64_t seed, double x, double y, double cell) {
  double gx = x / cell;
  double gy = y / cell;
  int ix = static_cast<int>(std::floor(gx));
  int iy = static_cast<int>(std::floor(gy));
  double fx = gx - ix;
  double fy = gy - iy;
  auto lattice = [&](int i, int j) {
    uint64_t h = derive_seed(seed, streams::kTexture,
                             (static_cast<uint64_t>(static_cast<uint32_t>(i)) << 32) |
                                 static_cast<uint32_t>(j));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
  };
  double v00 = lattice(ix, iy), v10 = lattice(ix + 1, iy);
  double v01 = lattice(ix, iy + 1), v11 = lattice(ix + 1, iy + 1);
  double top = v00 * (1.0 - fx) + v10 * fx;
  double bot = v01 * (1.0 - fx) + v11 * fx;
  return top * (1.0 - fy) + bot * fy;
}

// Piecewise luminance ramp: bright sky fading down, a step at the horizon,
// darker ground fading further. Strictly decreasing with the row index.
double ramp_luminance(int row, int size, int horizon) {
  if (row < horizon) {
    double t = horizon > 1 ? static_cast<double>(row) / (horizon - 1) : 0.0;
    return 0.95 - 0.25 * t;  // 0.95 -> 0.70
  }
  int ground_rows = size - horizon;
  double t = ground_rows > 1 ? static_cast<double>(row - horizon) / (ground_rows - 1) : 0.0;
  return 0.50 - 0.40 * t;  // 0.50 -> 0.10
}

void render_gradient_horizon(const SceneSpec& scene, RasterImage& img) {
  const int horizon = static_cast<int>(scene.size * 0.45);
  for (int y = 0; y < scene.size; ++y) {
    float v = static_cast<float>(ramp_luminance(y, scene.size, horizon));
    for (int x = 0; x < scene.size; ++x) img.at(x, y) = v;
  }
}

void render_textured_horizon(const SceneSpec& scene, RasterImage& img) {
  const int horizon = static_cast<int>(scene.size * 0.45);
  for (int y = 0; y < scene.size; ++y) {
    double base = ramp_luminance(y, scene.size, horizon);
    for (int x = 0; x < scene.size; ++x) {
      double v = base;
      if (y < horizon) {
        // Soft cloud bands in the sky.
        v += 0.05 * std::sin(2.0 * kPi * (3.0 * x / scene.size + 0.2 * y / scene.size));
      } else {
        v += 0.18 * (value_noise(scene.seed, x, y, 6.0) - 0.5);
      }
      img.at(x, y) = static_cast<float>(std::clamp(v, 0.02, 0.98));
    }
  }
}

void render_arrow_marker(const SceneSpec& scene, RasterImage& img) {
  const int n = scene.size;
  for (int y = 0; y < n; ++y) {
    float base = static_cast<float>(0.55 - 0.20 * y / (n - 1));
    for (int x = 0; x < n; ++x) img.at(x, y) = base;
  }
  // Upward arrow: triangular head over a rectangular shaft.
  const double cx = 0.5 * n;
  const double head_top = 0.15 * n, head_bottom = 0.40 * n, head_half = 0.20 * n;
  const double shaft_half = 0.06 * n, shaft_bottom = 0.78 * n;
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      double px = x + 0.5, py = y + 0.5;
      bool inside = false;
      if (py >= head_top && py < head_bottom) {
        double t = (py - head_top) / (head_bottom - head_top);
        inside = std::fabs(px - cx) <= t * head_half;
      } else if (py >= head_bottom && py < shaft_bottom) {
        inside = std::fabs(px - cx) <= shaft_half;
      }
      if (inside) img.at(x, y) = 0.95f;
    }
  }
}

std::string entry_filename(Split split, size_t index) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s/%06zu.png", std::string(split_name(split)).c_str(),
                index);
  return buf;
}

}  // namespace

std::string_view style_name(SceneStyle s) {
  switch (s) {
    case SceneStyle::kGradientHorizon: return "gradient_horizon";
    case SceneStyle::kTexturedHorizon: return "textured_horizon";
    case SceneStyle::kArrowMarker: return "arrow_marker";
  }
  return "?";
}

std::optional<SceneStyle> style_from_name(std::string_view name) {
  for (SceneStyle s : {SceneStyle::kGradientHorizon, SceneStyle::kTexturedHorizon,
                       SceneStyle::kArrowMarker}) {
    if (style_name(s) == name) return s;
  }
  return std::nullopt;
}

std::string_view split_name(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "?";
}

RasterImage render_base(const SceneSpec& scene) {
  if (scene.size < 32) throw std::invalid_argument("render_base: size must be >= 32");
  if (scene.noise_std < 0.0 || !std::isfinite(scene.noise_std)) {
    throw std::invalid_argument("render_base: bad noise_std");
  }
  RasterImage img = RasterImage::make(scene.size, scene.size, 1);
  switch (scene.style) {
    case SceneStyle::kGradientHorizon: render_gradient_horizon(scene, img); break;
    case SceneStyle::kTexturedHorizon: render_textured_horizon(scene, img); break;
    case SceneStyle::kArrowMarker: render_arrow_marker(scene, img); break;
  }
  if (scene.noise_std > 0.0) {
    SplitMix64 rng(derive_seed(scene.seed, streams::kNoise, 0));
    for (float& v : img.data) {
      v = static_cast<float>(
          std::clamp(v + scene.noise_std * rng.next_gaussian(), 0.0, 1.0));
    }
  }
  return img;
}

Sample make_sample(const SceneSpec& scene, Angle theta, int out_size) {
  Sample s;
  s.image = rotate_and_crop_serial(render_base(scene), theta, out_size);
  s.true_angle = theta;
  s.scene_seed = scene.seed;
  return s;
}

std::vector<RasterImage> make_sample_images(const std::vector<SceneSpec>& scenes,
                                            const std::vector<double>& angles_deg,
                                            int out_size, bool parallel) {
  if (scenes.size() != angles_deg.size()) {
    throw std::invalid_argument("make_sample_images: scenes/angles length mismatch");
  }
  std::vector<RasterImage> images(scenes.size());
  const int n = static_cast<int>(scenes.size());
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
      images[i] = make_sample(scenes[i], Angle::from_degrees(angles_deg[i]), out_size).image;
    }
  } else {
    for (int i = 0; i < n; ++i) {
      images[i] = make_sample(scenes[i], Angle::from_degrees(angles_deg[i]), out_size).image;
    }
  }
  return images;
}

DatasetSplits build_splits(const DatasetConfig& cfg) {
  if (cfg.n_train <= 0 || cfg.n_test <= 0) {
    throw std::invalid_argument("build_splits: counts must be positive");
  }
  if (!(cfg.val_fraction > 0.0 && cfg.val_fraction < 1.0)) {
    throw std::invalid_argument("build_splits: val_fraction must be in (0, 1)");
  }
  const int n_val = static_cast<int>(std::llround(cfg.n_train * cfg.val_fraction));
  const int n_train = cfg.n_train - n_val;
  if (n_val < 1 || n_train < 1) {
    throw std::invalid_argument("build_splits: insufficient counts for the requested split");
  }

  DatasetSplits out;
  out.train.split = Split::kTrain;
  out.val.split = Split::kVal;
  out.test.split = Split::kTest;

  // All scene identities derive from split_seed; only the rotation angles of
  // the test split depend on test_seed.
  size_t scene_index = 0;
  for (int i = 0; i < n_train; ++i, ++scene_index) {
    ManifestEntry e;
    e.path = entry_filename(Split::kTrain, static_cast<size_t>(i));
    e.angle_deg = 0.0;  // upright base; the trainer rotates per epoch
    e.scene_seed = derive_seed(cfg.split_seed, streams::kSceneSeed, scene_index);
    out.train.entries.push_back(std::move(e));
  }

  SplitMix64 val_rng(derive_seed(cfg.split_seed, streams::kValAngle, 0));
  for (int i = 0; i < n_val; ++i, ++scene_index) {
    ManifestEntry e;
    e.path = entry_filename(Split::kVal, static_cast<size_t>(i));
    e.angle_deg = 360.0 * val_rng.next_double();
    e.scene_seed = derive_seed(cfg.split_seed, streams::kSceneSeed, scene_index);
    out.val.entries.push_back(std::move(e));
  }

  SplitMix64 test_rng(derive_seed(cfg.test_seed, streams::kTestAngle, 0));
  for (int i = 0; i < cfg.n_test; ++i, ++scene_index) {
    ManifestEntry e;
    e.path = entry_filename(Split::kTest, static_cast<size_t>(i));
    e.angle_deg = 360.0 * test_rng.next_double();
    e.scene_seed = derive_seed(cfg.split_seed, streams::kSceneSeed, scene_index);
    out.test.entries.push_back(std::move(e));
  }
  return out;
}

void write_manifest(const std::string& path, const Manifest& m) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("write_manifest: cannot open " + path);
  f << "path,angle_deg,scene_seed\n";
  char buf[512];
  for (const auto& e : m.entries) {
    std::snprintf(buf, sizeof(buf), "%s,%.17g,%llu\n", e.path.c_str(), e.angle_deg,
                  static_cast<unsigned long long>(e.scene_seed));
    f << buf;
  }
}

Manifest read_manifest(const std::string& path, Split split) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("read_manifest: cannot open " + path);
  Manifest m;
  m.split = split;
  std::string line;
  if (!std::getline(f, line) || line != "path,angle_deg,scene_seed") {
    throw std::runtime_error("read_manifest: bad header in " + path);
  }
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    size_t c1 = line.find(',');
    size_t c2 = line.rfind(',');
    if (c1 == std::string::npos || c2 == c1) {
      throw std::runtime_error("read_manifest: malformed row in " + path);
    }
    ManifestEntry e;
    e.path = line.substr(0, c1);
    e.angle_deg = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
    e.scene_seed = std::stoull(line.substr(c2 + 1));
    m.entries.push_back(std::move(e));
  }
  return m;
}

void write_dataset(const std::string& dir, const DatasetConfig& cfg, bool parallel) {
  DatasetSplits splits = build_splits(cfg);
  fs::create_directories(dir);

  auto materialize = [&](const Manifest& m) {
    fs::create_directories(fs::path(dir) / std::string(split_name(m.split)));
    const int n = static_cast<int>(m.entries.size());
    std::vector<RasterImage> images(m.entries.size());
    // Train images are the upright bases; val/test are frozen rotated crops.
    const bool upright = m.split == Split::kTrain;
#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < n; ++i) {
      const ManifestEntry& e = m.entries[i];
      SceneSpec scene = scene_from_entry(cfg, e);
      images[i] = upright ? render_base(scene)
                          : make_sample(scene, Angle::from_degrees(e.angle_deg), cfg.out_size)
                                .image;
    }
    for (int i = 0; i < n; ++i) {
      write_png((fs::path(dir) / m.entries[i].path).string(), images[i]);
    }
    write_manifest((fs::path(dir) / (std::string(split_name(m.split)) + ".csv")).string(), m);
  };

  materialize(splits.train);
  materialize(splits.val);
  materialize(splits.test);

  nlohmann::json j;
  j["version"] = 1;
  j["n_train"] = cfg.n_train;
  j["val_fraction"] = cfg.val_fraction;
  j["n_test"] = cfg.n_test;
  j["split_seed"] = cfg.split_seed;
  j["test_seed"] = cfg.test_seed;
  j["base_size"] = cfg.base_size;
  j["out_size"] = cfg.out_size;
  j["style"] = std::string(style_name(cfg.style));
  j["noise_std"] = cfg.noise_std;
  std::ofstream f(fs::path(dir) / "dataset.json", std::ios::trunc);
  if (!f) throw std::runtime_error("write_dataset: cannot open dataset.json");
  f << j.dump(2) << "\n";
}

DatasetConfig read_dataset_config(const std::string& dir) {
  std::ifstream f(fs::path(dir) / "dataset.json");
  if (!f) throw std::runtime_error("read_dataset_config: missing dataset.json in " + dir);
  nlohmann::json j;
  f >> j;
  DatasetConfig cfg;
  cfg.n_train = j.at("n_train").get<int>();
  cfg.val_fraction = j.at("val_fraction").get<double>();
  cfg.n_test = j.at("n_test").get<int>();
  cfg.split_seed = j.at("split_seed").get<uint64_t>();
  cfg.test_seed = j.at("test_seed").get<uint64_t>();
  cfg.base_size = j.at("base_size").get<int>();
  cfg.out_size = j.at("out_size").get<int>();
  auto style = style_from_name(j.at("style").get<std::string>());
  if (!style) throw std::runtime_error("read_dataset_config: unknown style");
  cfg.style = *style;
  cfg.noise_std = j.at("noise_std").get<double>();
  return cfg;
}

SceneSpec scene_from_entry(const DatasetConfig& cfg, const ManifestEntry& e) {
  SceneSpec s;
  s.seed = e.scene_seed;
  s.size = cfg.base_size;
  s.style = cfg.style;
  s.noise_std = cfg.noise_std;
  return s;
}

}  // namespace rotkit
