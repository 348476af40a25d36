#include "rotkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "rotkit/angle.hpp"

#include <json.hpp>

namespace rotkit {

std::vector<double> per_sample_errors(std::span<const double> predictions_deg,
                                      std::span<const double> truths_deg) {
  if (predictions_deg.size() != truths_deg.size()) {
    throw std::invalid_argument("per_sample_errors: length mismatch");
  }
  std::vector<double> errors(predictions_deg.size());
  for (size_t i = 0; i < errors.size(); ++i) {
    errors[i] = circular_distance_deg(predictions_deg[i], truths_deg[i]);
  }
  return errors;
}

double quantile_sorted(std::span<const double> sorted_values, double q) {
  if (sorted_values.empty()) throw std::invalid_argument("quantile: empty input");
  if (q <= 0.0) return sorted_values.front();
  if (q >= 1.0) return sorted_values.back();
  double rank = q * static_cast<double>(sorted_values.size() - 1);
  size_t lo = static_cast<size_t>(std::floor(rank));
  double frac = rank - static_cast<double>(lo);
  if (lo + 1 >= sorted_values.size()) return sorted_values.back();
  return sorted_values[lo] * (1.0 - frac) + sorted_values[lo + 1] * frac;
}

MetricsReport report_from_errors(std::vector<double> errors) {
  if (errors.empty()) throw std::invalid_argument("metrics: empty error list");
  for (double e : errors) {
    if (!std::isfinite(e) || e < 0.0) throw std::invalid_argument("metrics: bad error value");
  }

  MetricsReport r;
  r.n = errors.size();
  double sum = 0.0, sum_sq = 0.0;
  for (double e : errors) {
    sum += e;
    sum_sq += e * e;
  }
  const double n = static_cast<double>(errors.size());
  r.mae = sum / n;
  r.rmse = std::sqrt(sum_sq / n);

  std::sort(errors.begin(), errors.end());
  r.median = quantile_sorted(errors, 0.5);
  r.p90 = quantile_sorted(errors, 0.90);
  r.p95 = quantile_sorted(errors, 0.95);

  for (int k : kAccThresholdsDeg) {
    // Acc@t is piecewise constant with jumps at the sorted errors, so the
    // integral over [0, k] is sum_i max(0, k - e_i) and needs no sweep.
    size_t within = 0;
    double area = 0.0;
    for (double e : errors) {
      if (e <= k) ++within;
      if (e < k) area += k - e;
    }
    r.acc_at[k] = static_cast<double>(within) / n;
    r.auc_at[k] = area / (n * k);
  }
  return r;
}

MetricsReport evaluate(std::span<const double> predictions_deg,
                       std::span<const double> truths_deg) {
  if (predictions_deg.empty()) throw std::invalid_argument("evaluate: empty input");
  return report_from_errors(per_sample_errors(predictions_deg, truths_deg));
}

std::string report_to_json(const MetricsReport& r) {
  nlohmann::json j;
  j["mae"] = r.mae;
  j["rmse"] = r.rmse;
  j["median"] = r.median;
  nlohmann::json acc, auc;
  for (const auto& [k, v] : r.acc_at) acc[std::to_string(k)] = v;
  for (const auto& [k, v] : r.auc_at) auc[std::to_string(k)] = v;
  j["acc_at"] = acc;
  j["auc_at"] = auc;
  j["p90"] = r.p90;
  j["p95"] = r.p95;
  j["n"] = r.n;
  return j.dump(2) + "\n";
}

void write_report_json(const std::string& path, const MetricsReport& r) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << report_to_json(r);
}

void write_report_csv(const std::string& path, const MetricsReport& r) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << "mae,rmse,median,acc2,acc5,acc10,auc2,auc5,auc10,p90,p95,n\n";
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%zu\n", r.mae, r.rmse,
                r.median, r.acc_at.at(2), r.acc_at.at(5), r.acc_at.at(10), r.auc_at.at(2),
                r.auc_at.at(5), r.auc_at.at(10), r.p90, r.p95, r.n);
  f << buf;
}

void write_errors_csv(const std::string& path, std::span<const double> truths_deg,
                      std::span<const double> predictions_deg) {
  auto errors = per_sample_errors(predictions_deg, truths_deg);
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << "true_deg,pred_deg,error_deg\n";
  char buf[256];
  for (size_t i = 0; i < errors.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f\n", truths_deg[i], predictions_deg[i],
                  errors[i]);
    f << buf;
  }
}

}  // namespace rotkit
