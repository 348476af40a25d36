#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace rotkit {

inline constexpr std::array<int, 3> kAccThresholdsDeg = {2, 5, 10};

struct MetricsReport {
  double mae = 0.0;
  double rmse = 0.0;
  double median = 0.0;
  std::map<int, double> acc_at;  // k -> fraction of errors <= k
  std::map<int, double> auc_at;  // k -> normalized area under Acc@t on [0,k]
  double p90 = 0.0;
  double p95 = 0.0;
  size_t n = 0;
};

// Elementwise circular distances, order-preserving.
std::vector<double> per_sample_errors(std::span<const double> predictions_deg,
                                      std::span<const double> truths_deg);

MetricsReport evaluate(std::span<const double> predictions_deg,
                       std::span<const double> truths_deg);

// Builds the report from precomputed circular errors (each in [0, 180]).
MetricsReport report_from_errors(std::vector<double> errors);

// Linear interpolation between order statistics; q in [0, 1].
double quantile_sorted(std::span<const double> sorted_values, double q);

std::string report_to_json(const MetricsReport& r);
void write_report_json(const std::string& path, const MetricsReport& r);
void write_report_csv(const std::string& path, const MetricsReport& r);
void write_errors_csv(const std::string& path, std::span<const double> truths_deg,
                      std::span<const double> predictions_deg);

}  // namespace rotkit
