#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "oracles.hpp"
#include "rotkit/model_io.hpp"
#include "rotkit/rng.hpp"
#include "rotkit/train.hpp"

using namespace rotkit;
namespace fs = std::filesystem;

namespace {

DatasetConfig tiny_dataset_config() {
  DatasetConfig cfg;
  cfg.n_train = 60;
  cfg.val_fraction = 0.2;
  cfg.n_test = 20;
  cfg.split_seed = 4;
  cfg.test_seed = 9;
  cfg.base_size = 48;
  cfg.out_size = 32;
  cfg.style = SceneStyle::kGradientHorizon;
  return cfg;
}

FeatureExtractor tiny_extractor() {
  FeatureExtractor fx;
  fx.kind = FeatureExtractor::Kind::kGradHistogram;
  fx.image_size = 32;
  fx.cell_grid = 2;
  fx.orientation_bins = 12;
  return fx;
}

}  // namespace

TEST_CASE("raw pixel features flatten and mean-subtract") {
  FeatureExtractor fx;
  fx.kind = FeatureExtractor::Kind::kRawPixels;
  fx.image_size = 64;
  RasterImage img = RasterImage::make(64, 64, 1);
  SplitMix64 rng(6);
  for (float& v : img.data) v = static_cast<float>(rng.next_double());
  auto f = extract_features(fx, img);
  REQUIRE(f.size() == 4096);
  double mean = 0.0;
  for (double v : f) mean += v;
  CHECK(std::fabs(mean / f.size()) < 1e-12);
}

TEST_CASE("uniform image has all-zero gradient histograms") {
  FeatureExtractor fx;
  fx.image_size = 32;
  RasterImage img = RasterImage::make(32, 32, 1, 0.5f);
  auto f = extract_features(fx, img);
  for (double v : f) CHECK(v == 0.0);
}

TEST_CASE("size mismatch is rejected") {
  FeatureExtractor fx;
  fx.image_size = 64;
  RasterImage img = RasterImage::make(32, 32, 1, 0.5f);
  CHECK_THROWS_AS(extract_features(fx, img), std::invalid_argument);
}

TEST_CASE("180 degree flip shifts orientation histograms by half a period") {
  FeatureExtractor fx;
  fx.image_size = 32;
  fx.cell_grid = 2;
  fx.orientation_bins = 12;
  RasterImage img = RasterImage::make(32, 32, 1);
  SplitMix64 rng(88);
  for (float& v : img.data) v = static_cast<float>(rng.next_double());

  RasterImage flipped = RasterImage::make(32, 32, 1);
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 32; ++x) flipped.at(x, y) = img.at(31 - x, 31 - y);
  }

  auto fa = extract_features(fx, img);
  auto fb = extract_features(fx, flipped);
  const int bins = fx.orientation_bins;
  const int grid = fx.cell_grid;
  for (int cy = 0; cy < grid; ++cy) {
    for (int cx = 0; cx < grid; ++cx) {
      int mirrored_cell = (grid - 1 - cy) * grid + (grid - 1 - cx);
      int cell = cy * grid + cx;
      for (int b = 0; b < bins; ++b) {
        double got = fb[mirrored_cell * bins + (b + bins / 2) % bins];
        CHECK(got == doctest::Approx(fa[cell * bins + b]).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("forward worked examples") {
  HeadParams p = HeadParams::init(2, 2, 1, 0);
  SUBCASE("zero weights give zero output") {
    std::fill(p.w1.begin(), p.w1.end(), 0.0);
    std::fill(p.w2.begin(), p.w2.end(), 0.0);
    std::vector<double> x = {0.3, -0.7};
    CHECK(forward(p, x)[0] == 0.0);
  }
  SUBCASE("hand-computed two-by-two") {
    p.w1 = {1.0, 0.0, 0.0, -1.0};  // h_pre = (x0, -x1)
    p.b1 = {0.0, 0.5};
    p.w2 = {2.0, 3.0};
    p.b2 = {0.25};
    std::vector<double> x = {1.5, 2.0};
    // h_pre = (1.5, -1.5); relu -> (1.5, 0); out = 2*1.5 + 3*0 + 0.25
    CHECK(forward(p, x)[0] == doctest::Approx(3.25));
  }
  SUBCASE("final layer is linear in its weights") {
    SplitMix64 rng(3);
    std::vector<double> x = {0.2, 0.9};
    double base = forward(p, x)[0] - p.b2[0];
    for (double& w : p.w2) w *= 2.0;
    double doubled = forward(p, x)[0] - p.b2[0];
    CHECK(doubled == doctest::Approx(2.0 * base).epsilon(1e-12));
  }
}

TEST_CASE("backward matches finite differences") {
  SplitMix64 rng(12);
  int checked = 0;
  while (checked < 50) {
    HeadParams p = HeadParams::init(7, 5, 3, rng.next());
    std::vector<double> x(7);
    for (double& v : x) v = 2.0 * rng.next_double() - 1.0;

    ForwardCache cache;
    forward(p, x, cache);
    bool kink = false;
    for (double h : cache.hidden_pre) {
      if (std::fabs(h) < 1e-3) kink = true;
    }
    if (kink) continue;

    // Scalar objective: weighted sum of outputs.
    std::vector<double> w(3);
    for (double& v : w) v = 2.0 * rng.next_double() - 1.0;

    ParamGrads grads = ParamGrads::zeros_like(p);
    backward(p, x, cache, w, grads);

    auto objective = [&](HeadParams& q) {
      auto out = forward(q, x);
      double s = 0.0;
      for (int i = 0; i < 3; ++i) s += w[i] * out[i];
      return s;
    };
    auto check_tensor = [&](std::vector<double>& tensor, const std::vector<double>& grad) {
      for (size_t i = 0; i < tensor.size(); i += 3) {  // sample every third entry
        double keep = tensor[i];
        tensor[i] = keep + 1e-5;
        double up = objective(p);
        tensor[i] = keep - 1e-5;
        double down = objective(p);
        tensor[i] = keep;
        double fd = (up - down) / 2e-5;
        CHECK(grad[i] == doctest::Approx(fd).epsilon(1e-4));
      }
    };
    check_tensor(p.w1, grads.w1);
    check_tensor(p.b1, grads.b1);
    check_tensor(p.w2, grads.w2);
    check_tensor(p.b2, grads.b2);
    ++checked;
  }
}

TEST_CASE("output-layer gradient is the outer product of upstream and hidden") {
  SplitMix64 rng(41);
  HeadParams p = HeadParams::init(5, 4, 3, 2);
  std::vector<double> x(5);
  for (double& v : x) v = 2.0 * rng.next_double() - 1.0;
  ForwardCache cache;
  forward(p, x, cache);
  std::vector<double> upstream = {0.3, -1.2, 0.8};
  ParamGrads grads = ParamGrads::zeros_like(p);
  backward(p, x, cache, upstream, grads);
  for (int o = 0; o < 3; ++o) {
    CHECK(grads.b2[o] == doctest::Approx(upstream[o]));
    for (int j = 0; j < 4; ++j) {
      CHECK(grads.w2[o * 4 + j] == doctest::Approx(upstream[o] * cache.hidden[j]));
    }
  }
}

TEST_CASE("zero upstream gradient produces zero parameter gradients") {
  HeadParams p = HeadParams::init(4, 3, 2, 5);
  std::vector<double> x = {0.1, 0.2, 0.3, 0.4};
  ForwardCache cache;
  forward(p, x, cache);
  ParamGrads grads = ParamGrads::zeros_like(p);
  std::vector<double> zero(2, 0.0);
  backward(p, x, cache, zero, grads);
  for (double g : grads.w1) CHECK(g == 0.0);
  for (double g : grads.w2) CHECK(g == 0.0);
}

TEST_CASE("end-to-end loss gradient through each codec matches finite differences") {
  SplitMix64 rng(9);
  for (Method m : all_methods()) {
    CodecSpec codec = CodecSpec::make(m);
    if (codec.output_dim() > 8) {
      // Keep the classification heads small for the parameter sweep.
      codec.bins = 8;
      codec.cgd_sigma_deg = 60.0;
    }
    int checked = 0;
    while (checked < 10) {
      HeadParams p = HeadParams::init(6, 4, codec.output_dim(), rng.next());
      std::vector<double> x(6);
      for (double& v : x) v = 2.0 * rng.next_double() - 1.0;
      auto target = encode(codec, Angle::from_degrees(360.0 * rng.next_double()));

      ForwardCache cache;
      forward(p, x, cache);
      bool kink = false;
      for (double h : cache.hidden_pre) {
        if (std::fabs(h) < 1e-3) kink = true;
      }
      // Absolute-value losses also have kinks in output space.
      if (m == Method::kDirectAngle || m == Method::kUnitVector ||
          m == Method::kPhaseShift) {
        for (size_t i = 0; i < cache.output.size(); ++i) {
          if (std::fabs(cache.output[i] - target[i]) < 1e-3) kink = true;
        }
      }
      if (kink) continue;

      LossValue lv = loss_and_grad(codec, cache.output, target);
      ParamGrads grads = ParamGrads::zeros_like(p);
      backward(p, x, cache, lv.gradient, grads);

      auto loss_at = [&]() {
        return loss_and_grad(codec, forward(p, x), target).loss;
      };
      auto probe = [&](std::vector<double>& tensor, const std::vector<double>& grad,
                       size_t i) {
        double keep = tensor[i];
        tensor[i] = keep + 1e-6;
        double up = loss_at();
        tensor[i] = keep - 1e-6;
        double down = loss_at();
        tensor[i] = keep;
        double fd = (up - down) / 2e-6;
        if (std::fabs(fd) > 1e-6 || std::fabs(grad[i]) > 1e-6) {
          CHECK(grad[i] == doctest::Approx(fd).epsilon(1e-3));
        }
      };
      probe(p.w1, grads.w1, 0);
      probe(p.w1, grads.w1, grads.w1.size() / 2);
      probe(p.b1, grads.b1, 1);
      probe(p.w2, grads.w2, 0);
      probe(p.b2, grads.b2, 0);
      ++checked;
    }
  }
}

TEST_CASE("training is deterministic and sensitive to the learning rate") {
  DatasetConfig data_cfg = tiny_dataset_config();
  DatasetSplits splits = build_splits(data_cfg);
  FeatureExtractor fx = tiny_extractor();

  CodecSpec codec = CodecSpec::make(Method::kUnitVector);
  TrainConfig cfg;
  cfg.max_epochs = 4;
  cfg.patience = 4;
  cfg.batch_size = 16;
  cfg.learning_rate = 3e-3;
  cfg.seed = 123;
  cfg.hidden_dim = 16;

  TrainResult a = train(codec, fx, splits.train, splits.val, data_cfg, cfg);
  TrainResult b = train(codec, fx, splits.train, splits.val, data_cfg, cfg);
  REQUIRE(a.log.size() == b.log.size());
  for (size_t i = 0; i < a.log.size(); ++i) {
    CHECK(a.log[i].val_mae == b.log[i].val_mae);
    bool both_nan = std::isnan(a.log[i].train_loss) && std::isnan(b.log[i].train_loss);
    CHECK((both_nan || a.log[i].train_loss == b.log[i].train_loss));
  }
  CHECK(a.params.w1 == b.params.w1);
  CHECK(a.params.w2 == b.params.w2);

  SUBCASE("zero learning rate leaves parameters untouched") {
    TrainConfig frozen = cfg;
    frozen.learning_rate = 0.0;
    TrainResult r = train(codec, fx, splits.train, splits.val, data_cfg, frozen);
    HeadParams fresh = HeadParams::init(fx.out_dim(), frozen.hidden_dim, codec.output_dim(),
                                        frozen.seed);
    CHECK(r.params.w1 == fresh.w1);
    CHECK(r.params.b2 == fresh.b2);
    for (size_t i = 1; i < r.log.size(); ++i) {
      CHECK(r.log[i].val_mae == r.log[0].val_mae);
    }
  }
}

TEST_CASE("structured codecs reduce validation MAE on the tiny task") {
  DatasetConfig data_cfg = tiny_dataset_config();
  DatasetSplits splits = build_splits(data_cfg);
  FeatureExtractor fx = tiny_extractor();

  for (Method m : {Method::kUnitVector, Method::kPhaseShift}) {
    CodecSpec codec = CodecSpec::make(m);
    TrainConfig cfg;
    cfg.max_epochs = 12;
    cfg.patience = 12;
    cfg.batch_size = 16;
    cfg.learning_rate = 5e-3;
    cfg.seed = 321;
    cfg.hidden_dim = 32;
    TrainResult r = train(codec, fx, splits.train, splits.val, data_cfg, cfg);
    INFO("method ", method_name(m));
    CHECK(r.best_val_mae < r.log.front().val_mae);
  }
}

TEST_CASE("divergence aborts with a diagnostic") {
  DatasetConfig data_cfg = tiny_dataset_config();
  DatasetSplits splits = build_splits(data_cfg);
  FeatureExtractor fx = tiny_extractor();
  CodecSpec codec = CodecSpec::make(Method::kUnitVector);
  TrainConfig cfg;
  cfg.max_epochs = 3;
  cfg.patience = 3;
  cfg.batch_size = 16;
  cfg.learning_rate = 1e200;
  cfg.optimizer = OptimizerKind::kSgdMomentum;
  cfg.seed = 1;
  cfg.hidden_dim = 8;
  CHECK_THROWS_AS(train(codec, fx, splits.train, splits.val, data_cfg, cfg),
                  std::runtime_error);
}

TEST_CASE("predict always returns a canonical angle") {
  FeatureExtractor fx = tiny_extractor();
  SceneSpec scene{2, 48, SceneStyle::kTexturedHorizon, 0.1};
  Sample s = make_sample(scene, Angle::from_degrees(123.0), 32);
  SplitMix64 rng(55);
  for (Method m : all_methods()) {
    CodecSpec codec = CodecSpec::make(m);
    HeadParams p = HeadParams::init(fx.out_dim(), 16, codec.output_dim(), rng.next());
    Angle a = predict(codec, fx, p, s.image);
    CHECK(a.degrees() >= 0.0);
    CHECK(a.degrees() < 360.0);
  }
}

TEST_CASE("model file round trip") {
  FeatureExtractor fx = tiny_extractor();
  CodecSpec codec = CodecSpec::make(Method::kCircularGaussian);
  HeadParams p = HeadParams::init(fx.out_dim(), 16, codec.output_dim(), 42);

  fs::path dir = fs::temp_directory_path() / "rotkit_model_test";
  fs::create_directories(dir);
  fs::path path = dir / "model.bin";
  save_model(path.string(), ModelFile{codec, fx, p});
  ModelFile back = load_model(path.string());

  CHECK(back.codec.method == codec.method);
  CHECK(back.codec.bins == codec.bins);
  CHECK(back.fx.kind == fx.kind);
  CHECK(back.fx.image_size == fx.image_size);
  CHECK(back.params.in_dim == p.in_dim);
  REQUIRE(back.params.w1.size() == p.w1.size());
  // Weights survive the 32-bit round trip to float precision.
  for (size_t i = 0; i < p.w1.size(); i += 7) {
    CHECK(back.params.w1[i] == doctest::Approx(p.w1[i]).epsilon(1e-6));
  }
  SceneSpec scene{3, 48, SceneStyle::kGradientHorizon, 0.0};
  Sample s = make_sample(scene, Angle::from_degrees(77.0), 32);
  Angle orig = predict(codec, fx, p, s.image);
  Angle loaded = predict(back.codec, back.fx, back.params, s.image);
  CHECK(circular_distance_deg(orig.degrees(), loaded.degrees()) < 1.5);

  CHECK_THROWS_AS(load_model("/nonexistent/model.bin"), std::runtime_error);
}
