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

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wassdet/attention.h"

namespace wassdet {

/// A scored, labelled sample. `score` is in anomaly orientation: higher
/// means more hallucination-like.
struct ScoredSample {
  std::string id;
  double score = 0.0;
  int label = 0;  // 1 = hallucination
  std::optional<Category> category;
};

/// One operating point of the rule "flag iff score > threshold". The last
/// point of a curve has threshold -inf (flag everything).
struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;
};

struct CategoryMetrics {
  double auroc = 0.0;
  double fpr_at_tpr = 0.0;
  std::size_t n_pos = 0;
};

struct EvaluationReport {
  double auroc = 0.0;
  double fpr_at_tpr = 0.0;
  double tpr_target = 0.9;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  std::map<Category, CategoryMetrics> per_category;
  std::vector<std::string> notes;
  std::vector<RocPoint> roc_points;
};

/// Mann-Whitney U / (n_pos n_neg), ties credited 1/2. Throws
/// DegenerateLabels without both classes.
double auroc(std::span<const ScoredSample> samples);

/// Trapezoidal area under the ROC curve with tied scores grouped into a
/// single step.
double auroc_trapezoid(std::span<const ScoredSample> samples);

/// Operating points from the strictest threshold (nothing flagged) down to
/// -inf (everything flagged), one per distinct score.
std::vector<RocPoint> roc_curve(std::span<const ScoredSample> samples);

/// Minimum FPR over operating points with TPR >= tpr_target.
double fpr_at_tpr(std::span<const ScoredSample> samples, double tpr_target = 0.9);

/// Overall metrics, ROC curve, and per-category metrics where each
/// category's positives are ranked against all negatives.
EvaluationReport evaluate(std::span<const ScoredSample> samples, double tpr_target = 0.9);

struct MeanStd {
  double mean = 0.0;
  std::optional<double> std;  // absent for a single run
};

/// Population mean / standard deviation of a metric across runs.
MeanStd aggregate(std::span<const double> values);

/// Evaluation of one detector across one or more seeds.
struct DetectorSummary {
  std::string detector;
  std::vector<std::uint64_t> seeds;
  std::vector<EvaluationReport> runs;
  std::size_t n_missing = 0;  // labelled samples without a score

  MeanStd auroc() const;
  MeanStd fpr_at_tpr() const;
  std::optional<MeanStd> category_auroc(Category c) const;
  std::optional<MeanStd> category_fpr(Category c) const;
};

/// Plain-text table: one row per detector, AUROC and FPR@TPR in percent.
std::string format_table(std::span<const DetectorSummary> summaries);

/// JSON document with every run's report plus the aggregates.
std::string report_to_json(std::span<const DetectorSummary> summaries);

/// "detector,seed,fpr,tpr,threshold" rows.
std::string roc_to_csv(std::span<const DetectorSummary> summaries);

}  // namespace wassdet
