#include "rotkit/compare.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "rotkit/rng.hpp"

namespace fs = std::filesystem;

namespace rotkit {

namespace {

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

std::string cell(const std::vector<ArmResult>& arms, size_t arm_idx,
                 double (*extract)(const MetricsReport&)) {
  const ArmResult& a = arms[arm_idx];
  if (a.failed) return "failed";
  std::vector<double> vals;
  vals.reserve(a.reports.size());
  for (const auto& r : a.reports) vals.push_back(extract(r));
  return format_cell(vals);
}

struct Column {
  const char* name;
  double (*extract)(const MetricsReport&);
};

const Column kColumns[] = {
    {"mae", [](const MetricsReport& r) { return r.mae; }},
    {"rmse", [](const MetricsReport& r) { return r.rmse; }},
    {"median", [](const MetricsReport& r) { return r.median; }},
    {"acc2", [](const MetricsReport& r) { return r.acc_at.at(2); }},
    {"acc5", [](const MetricsReport& r) { return r.acc_at.at(5); }},
    {"acc10", [](const MetricsReport& r) { return r.acc_at.at(10); }},
    {"auc2", [](const MetricsReport& r) { return r.auc_at.at(2); }},
    {"auc5", [](const MetricsReport& r) { return r.auc_at.at(5); }},
    {"auc10", [](const MetricsReport& r) { return r.auc_at.at(10); }},
    {"p90", [](const MetricsReport& r) { return r.p90; }},
    {"p95", [](const MetricsReport& r) { return r.p95; }},
};

}  // namespace

double default_learning_rate(const std::string& label) {
  // The direct-angle arms regress raw degrees, so they need a much larger
  // step than the unit-scale structured targets.
  if (label == "da" || label == "da_naive") return 0.03;
  return 3e-3;
}

std::vector<CompareArm> build_arms(const CompareOptions& opt) {
  std::vector<std::string> names = opt.methods;
  if (names.empty()) {
    for (Method m : all_methods()) names.emplace_back(method_name(m));
  }
  std::vector<CompareArm> arms;
  for (const auto& name : names) {
    auto m = method_from_name(name);
    if (!m) throw std::invalid_argument("compare: unknown method '" + name + "'");
    CompareArm arm;
    arm.label = name;
    arm.codec = CodecSpec::make(*m);
    arms.push_back(std::move(arm));
  }
  if (opt.include_naive_da) {
    CompareArm arm;
    arm.label = "da_naive";
    arm.codec = CodecSpec::make(Method::kDirectAngle);
    arm.codec.naive_l1 = true;
    arms.push_back(std::move(arm));
  }
  return arms;
}

std::vector<ArmResult> run_compare(const CompareOptions& opt) {
  if (opt.runs <= 0) throw std::invalid_argument("compare: runs must be positive");
  DatasetConfig data_cfg = read_dataset_config(opt.data_dir);
  Manifest train_m = read_manifest((fs::path(opt.data_dir) / "train.csv").string(),
                                   Split::kTrain);
  Manifest val_m = read_manifest((fs::path(opt.data_dir) / "val.csv").string(), Split::kVal);
  Manifest test_m = read_manifest((fs::path(opt.data_dir) / "test.csv").string(),
                                  Split::kTest);

  FeatureExtractor fx = opt.fx;
  fx.image_size = data_cfg.out_size;

  std::vector<ArmResult> results;
  for (const CompareArm& arm : build_arms(opt)) {
    ArmResult res;
    res.label = arm.label;
    try {
      for (int run = 0; run < opt.runs; ++run) {
        TrainConfig cfg = opt.train_cfg;
        // Run r uses the same derived seed for every method.
        cfg.seed = derive_seed(opt.train_seed, streams::kRun, static_cast<uint64_t>(run));
        if (cfg.learning_rate <= 0.0) cfg.learning_rate = default_learning_rate(arm.label);
        TrainResult tr = train(arm.codec, fx, train_m, val_m, data_cfg, cfg);
        EvalResult ev = evaluate_model(arm.codec, fx, tr.params, test_m, data_cfg);
        res.reports.push_back(ev.report);
        res.preds_per_run.push_back(std::move(ev.predictions_deg));
        if (res.truths_deg.empty()) res.truths_deg = std::move(ev.truths_deg);
      }
    } catch (const std::exception& e) {
      res.failed = true;
      res.error = e.what();
      res.reports.clear();
      res.preds_per_run.clear();
    }
    results.push_back(std::move(res));
  }
  return results;
}

std::string format_cell(const std::vector<double>& values) {
  char buf[96];
  if (values.size() == 1) {
    std::snprintf(buf, sizeof(buf), "%.4f", values[0]);
  } else {
    std::snprintf(buf, sizeof(buf), "%.4f(%.4f)", mean_of(values), std_of(values));
  }
  return buf;
}

void write_compare_outputs(const CompareOptions& opt, const std::vector<ArmResult>& arms) {
  fs::create_directories(opt.out_dir);
  DatasetConfig data_cfg = read_dataset_config(opt.data_dir);

  std::ofstream csv(fs::path(opt.out_dir) / "compare.csv", std::ios::trunc);
  std::ofstream md(fs::path(opt.out_dir) / "compare.md", std::ios::trunc);
  if (!csv || !md) throw std::runtime_error("compare: cannot open output tables");

  csv << "method,runs";
  md << "| method | runs";
  for (const auto& col : kColumns) {
    csv << "," << col.name;
    md << " | " << col.name;
  }
  csv << ",n\n";
  md << " | n |\n|";
  for (size_t i = 0; i < std::size(kColumns) + 3; ++i) md << "---|";
  md << "\n";

  for (size_t a = 0; a < arms.size(); ++a) {
    const ArmResult& arm = arms[a];
    size_t n = arm.failed ? 0 : arm.reports.front().n;
    csv << arm.label << "," << (arm.failed ? 0 : static_cast<int>(arm.reports.size()));
    md << "| " << arm.label << " | " << (arm.failed ? 0 : static_cast<int>(arm.reports.size()));
    for (const auto& col : kColumns) {
      std::string c = cell(arms, a, col.extract);
      csv << "," << c;
      md << " | " << c;
    }
    if (arm.failed) {
      csv << ",failed\n";
      md << " | failed |\n";
    } else {
      csv << "," << n << "\n";
      md << " | " << n << " |\n";
    }
  }

  // Per-arm error CSVs for the first run.
  for (const ArmResult& arm : arms) {
    if (arm.failed) continue;
    std::ofstream ef(fs::path(opt.out_dir) / ("errors_" + arm.label + ".csv"),
                     std::ios::trunc);
    if (!ef) throw std::runtime_error("compare: cannot open error csv");
    ef << "true_deg,pred_deg,error_deg\n";
    char buf[160];
    const auto& preds = arm.preds_per_run.front();
    for (size_t i = 0; i < preds.size(); ++i) {
      double err = circular_distance_deg(preds[i], arm.truths_deg[i]);
      std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f\n", arm.truths_deg[i], preds[i], err);
      ef << buf;
    }
  }

  nlohmann::json meta;
  meta["data_dir"] = opt.data_dir;
  meta["split_seed"] = data_cfg.split_seed;
  meta["test_seed"] = data_cfg.test_seed;
  meta["shared_test_seed_across_methods"] = true;
  meta["train_seed"] = opt.train_seed;
  meta["runs"] = opt.runs;
  nlohmann::json run_seeds = nlohmann::json::array();
  for (int r = 0; r < opt.runs; ++r) {
    run_seeds.push_back(derive_seed(opt.train_seed, streams::kRun, static_cast<uint64_t>(r)));
  }
  meta["run_seeds"] = run_seeds;
  nlohmann::json methods = nlohmann::json::array();
  for (const auto& arm : arms) methods.push_back(arm.label);
  meta["methods"] = methods;
  std::ofstream mf(fs::path(opt.out_dir) / "compare_meta.json", std::ios::trunc);
  if (!mf) throw std::runtime_error("compare: cannot open meta json");
  mf << meta.dump(2) << "\n";
}

}  // namespace rotkit
