// rotkit: synthetic rotation dataset generation, codec head training,
// evaluation, and the five-method comparison harness.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rotkit/compare.hpp"
#include "rotkit/model_io.hpp"
#include "rotkit/train.hpp"

namespace fs = std::filesystem;
using namespace rotkit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

// Default-named outputs land in $ROTKIT_OUT_DIR when it is set.
std::string out_path(const std::string& name) {
  const char* base = std::getenv("ROTKIT_OUT_DIR");
  if (!base || !*base) return name;
  fs::create_directories(base);
  return (fs::path(base) / name).string();
}

std::string methods_help() {
  std::string s = "valid methods:";
  for (Method m : all_methods()) s += " " + std::string(method_name(m));
  return s;
}

FeatureExtractor make_extractor(const std::string& name, int out_size) {
  FeatureExtractor fx;
  if (!feature_kind_from_name(name, fx.kind)) {
    throw CLI::ValidationError("--features", "unknown extractor '" + name +
                                   "' (valid: raw_pixels, grad_hist)");
  }
  fx.image_size = out_size;
  return fx;
}

struct SynthArgs {
  DatasetConfig cfg;
  std::string out_dir;
  std::string style = "gradient_horizon";
  bool serial = false;
};

int run_synth(SynthArgs& a) {
  auto style = style_from_name(a.style);
  if (!style) {
    std::cerr << "error: unknown style '" << a.style << "'\n";
    return kExitUsage;
  }
  a.cfg.style = *style;
  write_dataset(a.out_dir, a.cfg, !a.serial);
  DatasetSplits splits = build_splits(a.cfg);
  std::printf("wrote %s: %zu train, %zu val, %zu test (style %s, base %d, out %d)\n",
              a.out_dir.c_str(), splits.train.entries.size(), splits.val.entries.size(),
              splits.test.entries.size(), a.style.c_str(), a.cfg.base_size, a.cfg.out_size);
  return kExitOk;
}

struct TrainArgs {
  std::string method;
  std::string data_dir;
  std::string model_out;
  std::string log_out;
  std::string features = "grad_hist";
  TrainConfig cfg;
  std::string optimizer = "adam";
  bool naive_l1 = false;
  double lr = 0.0;  // 0: per-method default
};

int run_train(TrainArgs& a) {
  auto m = method_from_name(a.method);
  if (!m) {
    std::cerr << "error: unknown method '" << a.method << "'; " << methods_help() << "\n";
    return kExitUsage;
  }
  if (a.optimizer == "adam") {
    a.cfg.optimizer = OptimizerKind::kAdamLike;
  } else if (a.optimizer == "sgd") {
    a.cfg.optimizer = OptimizerKind::kSgdMomentum;
  } else {
    std::cerr << "error: unknown optimizer '" << a.optimizer << "' (valid: adam, sgd)\n";
    return kExitUsage;
  }

  CodecSpec codec = CodecSpec::make(*m);
  codec.naive_l1 = a.naive_l1;
  codec.validate();

  DatasetConfig data_cfg = read_dataset_config(a.data_dir);
  Manifest train_m = read_manifest((fs::path(a.data_dir) / "train.csv").string(),
                                   Split::kTrain);
  Manifest val_m = read_manifest((fs::path(a.data_dir) / "val.csv").string(), Split::kVal);

  FeatureExtractor fx = make_extractor(a.features, data_cfg.out_size);
  std::string label = a.naive_l1 ? "da_naive" : a.method;
  a.cfg.learning_rate = a.lr > 0.0 ? a.lr : default_learning_rate(label);

  TrainResult tr = train(codec, fx, train_m, val_m, data_cfg, a.cfg);

  std::string model_path =
      a.model_out.empty() ? out_path("model_" + label + ".bin") : a.model_out;
  std::string log_path =
      a.log_out.empty() ? out_path("train_log_" + label + ".csv") : a.log_out;
  save_model(model_path, ModelFile{codec, fx, tr.params});
  write_training_log(log_path, tr.log);
  std::printf("best val MAE %.4f deg at epoch %d (%zu epochs run); model %s, log %s\n",
              tr.best_val_mae, tr.best_epoch, tr.log.size() - 1, model_path.c_str(),
              log_path.c_str());
  return kExitOk;
}

struct EvalArgs {
  std::string model_path;
  std::string predictions_csv;
  bool self_eval = false;
  std::string data_dir;
  std::string split = "test";
  std::string method;  // optional cross-check against the model file
  std::string report_out;
  std::string errors_out;
};

int run_eval(EvalArgs& a) {
  if (a.report_out.empty()) a.report_out = out_path("report.json");
  if (a.errors_out.empty()) a.errors_out = out_path("errors.csv");
  Split split;
  if (a.split == "train") {
    split = Split::kTrain;
  } else if (a.split == "val") {
    split = Split::kVal;
  } else if (a.split == "test") {
    split = Split::kTest;
  } else {
    std::cerr << "error: unknown split '" << a.split << "'\n";
    return kExitUsage;
  }
  DatasetConfig data_cfg = read_dataset_config(a.data_dir);
  Manifest manifest = read_manifest((fs::path(a.data_dir) / (a.split + ".csv")).string(),
                                    split);

  std::vector<double> truths, preds;
  for (const auto& e : manifest.entries) truths.push_back(e.angle_deg);

  if (a.self_eval) {
    preds = truths;
  } else if (!a.predictions_csv.empty()) {
    // Join on path: CSV with header "path,pred_deg".
    std::ifstream f(a.predictions_csv);
    if (!f) throw std::runtime_error("cannot open " + a.predictions_csv);
    std::string line;
    std::getline(f, line);
    std::map<std::string, double> by_path;
    while (std::getline(f, line)) {
      if (line.empty()) continue;
      size_t c = line.find(',');
      if (c == std::string::npos) throw std::runtime_error("malformed predictions row");
      by_path[line.substr(0, c)] = std::stod(line.substr(c + 1));
    }
    for (const auto& e : manifest.entries) {
      auto it = by_path.find(e.path);
      if (it == by_path.end()) {
        throw std::runtime_error("predictions file misses entry " + e.path);
      }
      preds.push_back(it->second);
    }
  } else {
    ModelFile model = load_model(a.model_path);
    if (!a.method.empty() && a.method != method_name(model.codec.method)) {
      throw std::runtime_error("model file holds method '" +
                               std::string(method_name(model.codec.method)) +
                               "' but --method asked for '" + a.method + "'");
    }
    if (model.fx.image_size != data_cfg.out_size) {
      throw std::runtime_error("model expects images of size " +
                               std::to_string(model.fx.image_size) + " but dataset is " +
                               std::to_string(data_cfg.out_size));
    }
    EvalResult ev = evaluate_model(model.codec, model.fx, model.params, manifest, data_cfg);
    truths = std::move(ev.truths_deg);
    preds = std::move(ev.predictions_deg);
  }

  MetricsReport report = evaluate(preds, truths);
  write_report_json(a.report_out, report);
  write_errors_csv(a.errors_out, truths, preds);
  std::printf("n %zu  MAE %.4f  median %.4f  Acc@5 %.4f\n", report.n, report.mae,
              report.median, report.acc_at.at(5));
  return kExitOk;
}

struct CompareArgs {
  CompareOptions opt;
  std::string features = "grad_hist";
  std::string methods_csv;
  double lr = 0.0;
};

int run_cmd_compare(CompareArgs& a) {
  if (a.opt.out_dir.empty()) a.opt.out_dir = out_path("compare_out");
  if (!a.methods_csv.empty()) {
    std::stringstream ss(a.methods_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (!method_from_name(tok)) {
        std::cerr << "error: unknown method '" << tok << "'; " << methods_help() << "\n";
        return kExitUsage;
      }
      a.opt.methods.push_back(tok);
    }
  }
  DatasetConfig data_cfg = read_dataset_config(a.opt.data_dir);
  a.opt.fx = make_extractor(a.features, data_cfg.out_size);
  a.opt.train_cfg.learning_rate = a.lr;  // <= 0 keeps per-method defaults

  auto arms = run_compare(a.opt);
  write_compare_outputs(a.opt, arms);

  std::printf("%-10s %-6s %-16s %-16s %-16s\n", "method", "runs", "mae", "median", "acc5");
  for (const auto& arm : arms) {
    if (arm.failed) {
      std::printf("%-10s %-6s %-16s (%s)\n", arm.label.c_str(), "-", "failed",
                  arm.error.c_str());
      continue;
    }
    std::vector<double> mae, med, acc5;
    for (const auto& r : arm.reports) {
      mae.push_back(r.mae);
      med.push_back(r.median);
      acc5.push_back(r.acc_at.at(5));
    }
    std::printf("%-10s %-6zu %-16s %-16s %-16s\n", arm.label.c_str(), arm.reports.size(),
                format_cell(mae).c_str(), format_cell(med).c_str(),
                format_cell(acc5).c_str());
  }
  std::printf("outputs in %s\n", a.opt.out_dir.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"circular-aware rotation-angle estimation toolkit"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic oriented dataset");
  synth_cmd->add_option("--train", synth.cfg.n_train, "train+val scene count")->required();
  synth_cmd->add_option("--test", synth.cfg.n_test, "test scene count")->required();
  synth_cmd->add_option("--val-fraction", synth.cfg.val_fraction,
                        "fraction of --train used for validation");
  synth_cmd->add_option("--split-seed", synth.cfg.split_seed, "scene/val-angle seed")
      ->required();
  synth_cmd->add_option("--test-seed", synth.cfg.test_seed, "test-angle seed")->required();
  synth_cmd->add_option("--out", synth.out_dir, "output directory")->required();
  synth_cmd->add_option("--base-size", synth.cfg.base_size, "base scene size, pixels");
  synth_cmd->add_option("--out-size", synth.cfg.out_size, "sample size after rotate+crop");
  synth_cmd->add_option("--style", synth.style,
                        "gradient_horizon | textured_horizon | arrow_marker");
  synth_cmd->add_option("--noise", synth.cfg.noise_std, "additive Gaussian noise std");
  synth_cmd->add_flag("--serial", synth.serial, "disable the parallel generation path");

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "train one codec head");
  train_cmd->add_option("--method", train_args.method, methods_help())->required();
  train_cmd->add_option("--data", train_args.data_dir, "dataset directory")->required();
  train_cmd->add_option("--seed", train_args.cfg.seed, "training seed")->required();
  train_cmd->add_option("--epochs", train_args.cfg.max_epochs, "max epochs");
  train_cmd->add_option("--patience", train_args.cfg.patience, "early-stopping patience");
  train_cmd->add_option("--lr", train_args.lr, "learning rate (default: per-method)");
  train_cmd->add_option("--batch", train_args.cfg.batch_size, "batch size");
  train_cmd->add_option("--optimizer", train_args.optimizer, "adam | sgd");
  train_cmd->add_option("--features", train_args.features, "raw_pixels | grad_hist");
  train_cmd->add_option("--out", train_args.model_out, "model file (default model_<m>.bin)");
  train_cmd->add_option("--log", train_args.log_out, "training log CSV");
  train_cmd->add_flag("--naive-l1", train_args.naive_l1,
                      "direct-angle only: plain L1 loss instead of the circular loss");

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a model or a predictions file");
  eval_cmd->add_option("--model", eval_args.model_path, "model file");
  eval_cmd->add_option("--predictions", eval_args.predictions_csv,
                       "CSV 'path,pred_deg' instead of a model");
  eval_cmd->add_flag("--self-eval", eval_args.self_eval,
                     "score the ground truth against itself (sanity)");
  eval_cmd->add_option("--data", eval_args.data_dir, "dataset directory")->required();
  eval_cmd->add_option("--split", eval_args.split, "train | val | test");
  eval_cmd->add_option("--method", eval_args.method, "cross-check the model's method");
  eval_cmd->add_option("--report", eval_args.report_out,
                       "metrics JSON output (default report.json)");
  eval_cmd->add_option("--errors", eval_args.errors_out,
                       "per-sample error CSV output (default errors.csv)");

  CompareArgs cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "train and evaluate all methods");
  cmp_cmd->add_option("--data", cmp.opt.data_dir, "dataset directory")->required();
  cmp_cmd->add_option("--out-dir", cmp.opt.out_dir,
                      "output directory (default: compare_out, under $ROTKIT_OUT_DIR if set)");
  cmp_cmd->add_option("--seed", cmp.opt.train_seed, "base training seed");
  cmp_cmd->add_option("--runs", cmp.opt.runs, "independent training runs per method");
  cmp_cmd->add_option("--methods", cmp.methods_csv, "comma list (default: all five)");
  cmp_cmd->add_flag("--include-naive-da", cmp.opt.include_naive_da,
                    "add the non-circular L1 direct-angle arm");
  cmp_cmd->add_option("--epochs", cmp.opt.train_cfg.max_epochs, "max epochs");
  cmp_cmd->add_option("--patience", cmp.opt.train_cfg.patience, "early-stopping patience");
  cmp_cmd->add_option("--lr", cmp.lr, "learning rate override (default: per-method)");
  cmp_cmd->add_option("--batch", cmp.opt.train_cfg.batch_size, "batch size");
  cmp_cmd->add_option("--features", cmp.features, "raw_pixels | grad_hist");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (synth_cmd->parsed()) return run_synth(synth);
    if (train_cmd->parsed()) return run_train(train_args);
    if (eval_cmd->parsed()) return run_eval(eval_args);
    if (cmp_cmd->parsed()) return run_cmd_compare(cmp);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
