// Copyright 2026 The wassdet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wassdet/eval.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <algorithm>

#include "wassdet/errors.h"

namespace wassdet {
namespace {

std::vector<ScoredSample> samples(const std::vector<double>& pos, const std::vector<double>& neg) {
  std::vector<ScoredSample> out;
  int i = 0;
  for (double s : pos) out.push_back({"p" + std::to_string(i++), s, 1, Category::kOscillatory});
  for (double s : neg) out.push_back({"n" + std::to_string(i++), s, 0, std::nullopt});
  return out;
}

// Counts ordered (positive, negative) pairs; ties count half.
double pairwise_auroc(std::span<const ScoredSample> s) {
  double wins = 0.0;
  double pairs = 0.0;
  for (const auto& a : s) {
    if (a.label != 1) continue;
    for (const auto& b : s) {
      if (b.label != 0) continue;
      pairs += 1.0;
      wins += a.score > b.score ? 1.0 : (a.score == b.score ? 0.5 : 0.0);
    }
  }
  return wins / pairs;
}

// Try every threshold "flag when score > t" for t in the observed scores and
// below all of them; keep the smallest FPR whose TPR reaches the target.
double sweep_fpr(std::span<const ScoredSample> s, double target) {
  std::vector<double> thresholds = {-std::numeric_limits<double>::infinity()};
  for (const auto& x : s) thresholds.push_back(x.score);
  double best = 1.0;
  for (double t : thresholds) {
    double tp = 0, fp = 0, p = 0, n = 0;
    for (const auto& x : s) {
      (x.label ? p : n) += 1;
      if (x.score > t) (x.label ? tp : fp) += 1;
    }
    if (tp / p >= target - 1e-12) best = std::min(best, fp / n);
  }
  return best;
}

TEST(Auroc, WorkedExample) {
  auto s = samples({3, 1}, {2, 0});
  EXPECT_DOUBLE_EQ(auroc(s), 0.75);
  EXPECT_DOUBLE_EQ(auroc_trapezoid(s), 0.75);
  EXPECT_DOUBLE_EQ(fpr_at_tpr(s, 0.9), 0.5);
}

TEST(Auroc, PerfectAndTied) {
  auto perfect = samples({5, 6, 7}, {1, 2});
  EXPECT_EQ(auroc(perfect), 1.0);
  EXPECT_EQ(fpr_at_tpr(perfect), 0.0);
  auto tied = samples({1, 1}, {1, 1, 1});
  EXPECT_EQ(auroc(tied), 0.5);
  EXPECT_EQ(auroc_trapezoid(tied), 0.5);
  EXPECT_EQ(fpr_at_tpr(tied), 1.0);
}

TEST(Auroc, RandomSetsAgreeWithOracles) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> size(2, 60);
  std::uniform_int_distribution<int> coarse(0, 6);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = size(rng);
    std::vector<ScoredSample> s;
    for (int i = 0; i < n; ++i) {
      s.push_back({std::to_string(i), static_cast<double>(coarse(rng)) / 3.0, i % 2, std::nullopt});
    }
    std::shuffle(s.begin(), s.end(), rng);
    const double mw = auroc(s);
    EXPECT_NEAR(mw, auroc_trapezoid(s), 1e-12);
    EXPECT_NEAR(mw, pairwise_auroc(s), 1e-12);
    EXPECT_DOUBLE_EQ(fpr_at_tpr(s, 0.9), sweep_fpr(s, 0.9));
    EXPECT_DOUBLE_EQ(fpr_at_tpr(s, 0.5), sweep_fpr(s, 0.5));
  }
}

TEST(Auroc, DegenerateLabelsThrow) {
  auto only_pos = samples({1, 2}, {});
  try {
    auroc(only_pos);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateLabels);
  }
  EXPECT_THROW(fpr_at_tpr(samples({}, {1}), 0.9), Error);
  EXPECT_THROW(evaluate(samples({}, {1}), 0.9), Error);
}

TEST(Auroc, RejectsNanAndBadTarget) {
  auto s = samples({std::nan("")}, {0});
  EXPECT_THROW(auroc(s), Error);
  EXPECT_THROW(fpr_at_tpr(samples({1}, {0}), 0.0), Error);
  EXPECT_THROW(fpr_at_tpr(samples({1}, {0}), 1.5), Error);
}

TEST(RocCurve, StartsAtOriginEndsAtCorner) {
  auto roc = roc_curve(samples({3, 1}, {2, 0}));
  ASSERT_GE(roc.size(), 2u);
  EXPECT_EQ(roc.front().fpr, 0.0);
  EXPECT_EQ(roc.front().tpr, 0.0);
  EXPECT_EQ(roc.back().fpr, 1.0);
  EXPECT_EQ(roc.back().tpr, 1.0);
  EXPECT_TRUE(std::isinf(roc.back().threshold));
  for (std::size_t i = 1; i < roc.size(); ++i) {
    EXPECT_GE(roc[i].fpr, roc[i - 1].fpr);
    EXPECT_GE(roc[i].tpr, roc[i - 1].tpr);
  }
}

TEST(Evaluate, SingleCategoryMatchesOverall) {
  auto s = samples({3, 1, 2.5}, {2, 0, 0.5});
  auto rep = evaluate(s, 0.9);
  EXPECT_EQ(rep.auroc, auroc(s));
  EXPECT_EQ(rep.fpr_at_tpr, fpr_at_tpr(s, 0.9));
  ASSERT_EQ(rep.per_category.size(), 1u);
  const auto& cat = rep.per_category.at(Category::kOscillatory);
  EXPECT_EQ(cat.auroc, rep.auroc);
  EXPECT_EQ(cat.fpr_at_tpr, rep.fpr_at_tpr);
  EXPECT_EQ(cat.n_pos, 3u);
  EXPECT_EQ(rep.n_pos, 3u);
  EXPECT_EQ(rep.n_neg, 3u);
}

TEST(Evaluate, CategoriesAgainstAllNegatives) {
  std::vector<ScoredSample> s = {
      {"a", 5, 1, Category::kFullyDetached}, {"b", 1.5, 1, Category::kOscillatory},
      {"c", 1, 0, std::nullopt},            {"d", 2, 0, std::nullopt}};
  auto rep = evaluate(s, 0.9);
  EXPECT_EQ(rep.per_category.at(Category::kFullyDetached).auroc, 1.0);
  EXPECT_EQ(rep.per_category.at(Category::kOscillatory).auroc, 0.5);
  EXPECT_EQ(rep.per_category.count(Category::kOther), 0u);
}

TEST(Aggregate, PopulationStd) {
  auto one = aggregate(std::vector<double>{0.8});
  EXPECT_EQ(one.mean, 0.8);
  EXPECT_FALSE(one.std.has_value());
  auto two = aggregate(std::vector<double>{1.0, 3.0});
  EXPECT_EQ(two.mean, 2.0);
  ASSERT_TRUE(two.std.has_value());
  EXPECT_DOUBLE_EQ(*two.std, 1.0);
}

DetectorSummary summary_for(std::vector<std::vector<ScoredSample>> runs) {
  DetectorSummary d;
  d.detector = "Wass-Combo";
  std::uint64_t seed = 0;
  for (const auto& r : runs) {
    d.runs.push_back(evaluate(r, 0.9));
    d.seeds.push_back(seed++);
  }
  return d;
}

TEST(Table, StdColumnOnlyForMultipleSeeds) {
  auto s = samples({3, 1}, {2, 0});
  std::vector<DetectorSummary> single = {summary_for({s})};
  const std::string t1 = format_table(single);
  EXPECT_NE(t1.find("75.00"), std::string::npos);
  EXPECT_EQ(t1.find("±"), std::string::npos);
  std::vector<DetectorSummary> multi = {summary_for({s, samples({3, 2}, {1, 0})})};
  const std::string t2 = format_table(multi);
  EXPECT_NE(t2.find("87.50 ± 12.50"), std::string::npos) << t2;
}

TEST(Report, JsonAndCsv) {
  std::vector<DetectorSummary> d = {summary_for({samples({3, 1}, {2, 0})})};
  const std::string json = report_to_json(d);
  EXPECT_NE(json.find("\"Wass-Combo\""), std::string::npos);
  EXPECT_NE(json.find("-inf"), std::string::npos);
  const std::string csv = roc_to_csv(d);
  EXPECT_EQ(csv.rfind("detector,seed,fpr,tpr,threshold\n", 0), 0u);
}

}  // namespace
}  // namespace wassdet
