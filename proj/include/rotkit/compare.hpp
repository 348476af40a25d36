#pragma once

#include <string>
#include <vector>

#include "rotkit/train.hpp"

namespace rotkit {

// One row of the comparison table: a method (or the naive-L1 direct-angle
// arm) trained `runs` times with shared seeds and evaluated on the shared
// test split.
struct CompareArm {
  std::string label;  // "da", "uv", "psc", "cls", "cgd", "da_naive"
  CodecSpec codec;
  double learning_rate = 0.0;  // 0 means: use the per-method default
};

struct CompareOptions {
  std::string data_dir;
  std::string out_dir;
  std::vector<std::string> methods;  // empty = all five
  bool include_naive_da = false;
  int runs = 1;
  uint64_t train_seed = 1;
  TrainConfig train_cfg;  // learning_rate <= 0 selects per-method defaults
  FeatureExtractor fx;
};

struct ArmResult {
  std::string label;
  bool failed = false;
  std::string error;
  std::vector<MetricsReport> reports;             // one per run
  std::vector<double> truths_deg;                 // shared across runs
  std::vector<std::vector<double>> preds_per_run; // [run][sample]
};

// Per-method base learning rate used when the config does not pin one.
// The direct-angle arms regress raw degrees and need a larger step.
double default_learning_rate(const std::string& label);

std::vector<CompareArm> build_arms(const CompareOptions& opt);

// Trains and evaluates every arm. A failed arm is recorded, not fatal.
std::vector<ArmResult> run_compare(const CompareOptions& opt);

// compare.csv / compare.md (mean(std) cells when runs > 1), per-arm error
// CSVs, and compare_meta.json recording the shared seeds.
void write_compare_outputs(const CompareOptions& opt, const std::vector<ArmResult>& arms);

std::string format_cell(const std::vector<double>& values);

}  // namespace rotkit
