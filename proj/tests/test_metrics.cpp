#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "rotkit/metrics.hpp"
#include "rotkit/rng.hpp"

using namespace rotkit;

TEST_CASE("per-sample errors") {
  std::vector<double> truths = {10.0, 200.0, 359.0};
  CHECK(per_sample_errors(truths, truths) == std::vector<double>{0.0, 0.0, 0.0});

  std::vector<double> anti = {190.0, 20.0, 179.0};
  for (double e : per_sample_errors(anti, truths)) CHECK(e == doctest::Approx(180.0));

  std::vector<double> p = {359.0};
  std::vector<double> t = {1.0};
  CHECK(per_sample_errors(p, t)[0] == doctest::Approx(2.0));

  std::vector<double> mismatch = {1.0, 2.0};
  CHECK_THROWS_AS(per_sample_errors(mismatch, t), std::invalid_argument);
}

TEST_CASE("report examples") {
  SUBCASE("constant errors") {
    std::vector<double> truths = {10.0, 100.0, 350.0};
    std::vector<double> preds = {12.0, 102.0, 352.0};
    MetricsReport r = evaluate(preds, truths);
    CHECK(r.mae == doctest::Approx(2.0));
    CHECK(r.rmse == doctest::Approx(2.0));
    CHECK(r.median == doctest::Approx(2.0));
  }
  SUBCASE("acc at five") {
    MetricsReport r = report_from_errors({1.0, 4.0, 6.0, 10.0});
    CHECK(r.acc_at.at(5) == doctest::Approx(0.5));
  }
  SUBCASE("auc closed form") {
    // Acc@t is 1/3 on [0,2) and 2/3 on [2,4): integral (2/3 + 4/3) / 4 = 0.5.
    MetricsReport r = report_from_errors({0.0, 2.0, 4.0});
    double auc4 = 0.0;
    {
      // k=4 is not a reported threshold; recompute with the same closed form.
      std::vector<double> errors = {0.0, 2.0, 4.0};
      double area = 0.0;
      for (double e : errors) area += std::max(0.0, 4.0 - e);
      auc4 = area / (errors.size() * 4.0);
    }
    CHECK(auc4 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.auc_at.at(2) == doctest::Approx((2.0 + 0.0 + 0.0) / (3.0 * 2.0)));
  }
  SUBCASE("all-zero errors saturate the report") {
    MetricsReport r = report_from_errors(std::vector<double>(50, 0.0));
    CHECK(r.mae == 0.0);
    CHECK(r.rmse == 0.0);
    CHECK(r.median == 0.0);
    CHECK(r.p90 == 0.0);
    CHECK(r.p95 == 0.0);
    for (int k : kAccThresholdsDeg) {
      CHECK(r.acc_at.at(k) == 1.0);
      CHECK(r.auc_at.at(k) == 1.0);
    }
  }
}

TEST_CASE("closed-form AUC matches the Riemann oracle") {
  SplitMix64 rng(404);
  for (int trial = 0; trial < 20; ++trial) {
    size_t n = 1 + rng.next() % 200;
    std::vector<double> errors(n);
    for (double& e : errors) e = 180.0 * rng.next_double() * rng.next_double();
    MetricsReport r = report_from_errors(errors);
    for (int k : kAccThresholdsDeg) {
      double oracle = oracles::riemann_auc(errors, k);
      CHECK(std::fabs(r.auc_at.at(k) - oracle) < 1e-3);
    }
  }
}

TEST_CASE("report invariants hold on random error sets") {
  SplitMix64 rng(2);
  for (int trial = 0; trial < 1000; ++trial) {
    size_t n = 1 + rng.next() % 60;
    std::vector<double> errors(n);
    for (double& e : errors) e = 180.0 * rng.next_double();
    MetricsReport r = report_from_errors(errors);
    CHECK(r.mae <= r.rmse + 1e-12);
    CHECK(r.median <= r.p90 + 1e-12);
    CHECK(r.p90 <= r.p95 + 1e-12);
    CHECK(r.p95 <= 180.0 + 1e-12);
    double prev_acc = 0.0;
    for (int k : kAccThresholdsDeg) {
      CHECK(r.acc_at.at(k) >= prev_acc - 1e-12);
      prev_acc = r.acc_at.at(k);
      CHECK(r.auc_at.at(k) <= r.acc_at.at(k) + 1e-12);
      CHECK(r.auc_at.at(k) >= 0.0);
      CHECK(r.acc_at.at(k) <= 1.0);
    }
  }
}

TEST_CASE("evaluate is permutation invariant") {
  SplitMix64 rng(77);
  std::vector<double> truths(40), preds(40);
  for (size_t i = 0; i < truths.size(); ++i) {
    truths[i] = 360.0 * rng.next_double();
    preds[i] = 360.0 * rng.next_double();
  }
  MetricsReport base = evaluate(preds, truths);

  std::vector<size_t> idx(truths.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng.next() % i]);
  std::vector<double> t2(truths.size()), p2(truths.size());
  for (size_t i = 0; i < idx.size(); ++i) {
    t2[i] = truths[idx[i]];
    p2[i] = preds[idx[i]];
  }
  MetricsReport shuffled = evaluate(p2, t2);
  CHECK(base.mae == doctest::Approx(shuffled.mae).epsilon(1e-12));
  CHECK(base.rmse == doctest::Approx(shuffled.rmse).epsilon(1e-12));
  CHECK(base.median == doctest::Approx(shuffled.median).epsilon(1e-12));
  CHECK(base.p95 == doctest::Approx(shuffled.p95).epsilon(1e-12));
  for (int k : kAccThresholdsDeg) {
    CHECK(base.acc_at.at(k) == doctest::Approx(shuffled.acc_at.at(k)).epsilon(1e-12));
    CHECK(base.auc_at.at(k) == doctest::Approx(shuffled.auc_at.at(k)).epsilon(1e-12));
  }
}

TEST_CASE("empty and mismatched inputs are rejected") {
  std::vector<double> empty;
  CHECK_THROWS_AS(evaluate(empty, empty), std::invalid_argument);
  CHECK_THROWS_AS(report_from_errors({}), std::invalid_argument);
  std::vector<double> one = {1.0};
  std::vector<double> two = {1.0, 2.0};
  CHECK_THROWS_AS(evaluate(one, two), std::invalid_argument);
}

TEST_CASE("quantile interpolation convention") {
  std::vector<double> sorted = {0.0, 10.0};
  CHECK(quantile_sorted(sorted, 0.5) == doctest::Approx(5.0));
  std::vector<double> v = {1.0, 2.0, 3.0, 4.0};
  CHECK(quantile_sorted(v, 0.5) == doctest::Approx(2.5));
  CHECK(quantile_sorted(v, 0.0) == doctest::Approx(1.0));
  CHECK(quantile_sorted(v, 1.0) == doctest::Approx(4.0));
}

TEST_CASE("json and csv serialization include every field") {
  MetricsReport r = report_from_errors({1.0, 2.0, 3.0});
  std::string json = report_to_json(r);
  for (const char* key : {"mae", "rmse", "median", "acc_at", "auc_at", "p90", "p95", "n"}) {
    CHECK(json.find(key) != std::string::npos);
  }
}
