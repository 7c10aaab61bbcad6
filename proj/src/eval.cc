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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "wassdet/errors.h"

namespace wassdet {

namespace {

struct ClassCounts {
  std::uint64_t pos = 0;
  std::uint64_t neg = 0;
};

ClassCounts count_classes(std::span<const ScoredSample> samples) {
  ClassCounts c;
  for (const auto& s : samples) {
    if (std::isnan(s.score)) {
      throw Error(ErrorCode::kInvalidArgument, "sample " + s.id + " has a NaN score");
    }
    if (s.label == 1) {
      ++c.pos;
    } else if (s.label == 0) {
      ++c.neg;
    } else {
      throw Error(ErrorCode::kInvalidArgument, "sample " + s.id + " has a non-binary label");
    }
  }
  if (c.pos == 0 || c.neg == 0) {
    throw Error(ErrorCode::kDegenerateLabels,
                "need at least one positive and one negative sample");
  }
  return c;
}

std::vector<std::size_t> order_by_score(std::span<const ScoredSample> samples,
                                        bool descending) {
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return descending ? samples[a].score > samples[b].score
                      : samples[a].score < samples[b].score;
  });
  return order;
}

}  // namespace

double auroc(std::span<const ScoredSample> samples) {
  const ClassCounts c = count_classes(samples);
  const auto order = order_by_score(samples, /*descending=*/false);
  // Twice the mid-rank of each tie group keeps the rank sum integral.
  std::uint64_t pos_rank_x2 = 0;
  for (std::size_t a = 0; a < order.size();) {
    std::size_t b = a + 1;
    while (b < order.size() && samples[order[b]].score == samples[order[a]].score) ++b;
    const std::uint64_t rank_x2 = a + b + 1;
    for (std::size_t i = a; i < b; ++i) {
      if (samples[order[i]].label == 1) pos_rank_x2 += rank_x2;
    }
    a = b;
  }
  const std::uint64_t u_x2 = pos_rank_x2 - c.pos * (c.pos + 1);
  return static_cast<double>(u_x2) / (2.0 * static_cast<double>(c.pos) *
                                       static_cast<double>(c.neg));
}

double auroc_trapezoid(std::span<const ScoredSample> samples) {
  const ClassCounts c = count_classes(samples);
  const auto order = order_by_score(samples, /*descending=*/true);
  std::uint64_t tp = 0, fp = 0, area_x2 = 0;
  for (std::size_t a = 0; a < order.size();) {
    const std::uint64_t tp_prev = tp, fp_prev = fp;
    std::size_t b = a;
    while (b < order.size() && samples[order[b]].score == samples[order[a]].score) {
      (samples[order[b]].label == 1 ? tp : fp) += 1;
      ++b;
    }
    area_x2 += (fp - fp_prev) * (tp + tp_prev);
    a = b;
  }
  return static_cast<double>(area_x2) / (2.0 * static_cast<double>(c.pos) *
                                         static_cast<double>(c.neg));
}

std::vector<RocPoint> roc_curve(std::span<const ScoredSample> samples) {
  const ClassCounts c = count_classes(samples);
  const auto order = order_by_score(samples, /*descending=*/true);
  const double pos = static_cast<double>(c.pos);
  const double neg = static_cast<double>(c.neg);
  std::vector<RocPoint> points;
  points.push_back({0.0, 0.0, samples[order.front()].score});
  std::uint64_t tp = 0, fp = 0;
  for (std::size_t a = 0; a < order.size();) {
    std::size_t b = a;
    while (b < order.size() && samples[order[b]].score == samples[order[a]].score) {
      (samples[order[b]].label == 1 ? tp : fp) += 1;
      ++b;
    }
    // Everything scored >= the current group is now flagged, which is the
    // rule "score > next lower distinct value".
    const double threshold = b < order.size() ? samples[order[b]].score
                                              : -std::numeric_limits<double>::infinity();
    points.push_back({static_cast<double>(fp) / neg, static_cast<double>(tp) / pos, threshold});
    a = b;
  }
  return points;
}

double fpr_at_tpr(std::span<const ScoredSample> samples, double tpr_target) {
  if (!(tpr_target > 0.0 && tpr_target <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tpr_target must lie in (0, 1]");
  }
  constexpr double kEps = 1e-12;
  double best = 1.0;
  for (const RocPoint& p : roc_curve(samples)) {
    if (p.tpr + kEps >= tpr_target) best = std::min(best, p.fpr);
  }
  return best;
}

EvaluationReport evaluate(std::span<const ScoredSample> samples, double tpr_target) {
  EvaluationReport r;
  r.tpr_target = tpr_target;
  const ClassCounts c = count_classes(samples);
  r.n_pos = c.pos;
  r.n_neg = c.neg;
  r.auroc = auroc(samples);
  r.fpr_at_tpr = fpr_at_tpr(samples, tpr_target);
  r.roc_points = roc_curve(samples);

  std::vector<ScoredSample> negatives;
  for (const auto& s : samples) {
    if (s.label == 0) negatives.push_back(s);
  }
  for (Category cat : {Category::kFullyDetached, Category::kStronglyDetached,
                       Category::kOscillatory, Category::kOther}) {
    std::vector<ScoredSample> subset;
    bool seen = false;
    for (const auto& s : samples) {
      if (s.category != cat) continue;
      seen = true;
      if (s.label == 1) subset.push_back(s);
    }
    if (subset.empty()) {
      if (seen) {
        r.notes.push_back(std::string(category_name(cat)) +
                          ": no positive samples, category omitted");
      }
      continue;
    }
    const std::size_t n_pos = subset.size();
    subset.insert(subset.end(), negatives.begin(), negatives.end());
    r.per_category[cat] = {auroc(subset), fpr_at_tpr(subset, tpr_target), n_pos};
  }
  return r;
}

MeanStd aggregate(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kEmptyScores, "nothing to aggregate");
  MeanStd out;
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) /
             static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(values.size()));
  }
  return out;
}

namespace {

template <typename F>
MeanStd collect(const std::vector<EvaluationReport>& runs, F&& metric) {
  std::vector<double> v;
  for (const auto& r : runs) v.push_back(metric(r));
  return aggregate(v);
}

template <typename F>
std::optional<MeanStd> collect_category(const std::vector<EvaluationReport>& runs,
                                        Category c, F&& metric) {
  std::vector<double> v;
  for (const auto& r : runs) {
    auto it = r.per_category.find(c);
    if (it == r.per_category.end()) return std::nullopt;
    v.push_back(metric(it->second));
  }
  if (v.empty()) return std::nullopt;
  return aggregate(v);
}

}  // namespace

MeanStd DetectorSummary::auroc() const {
  return collect(runs, [](const EvaluationReport& r) { return r.auroc; });
}

MeanStd DetectorSummary::fpr_at_tpr() const {
  return collect(runs, [](const EvaluationReport& r) { return r.fpr_at_tpr; });
}

std::optional<MeanStd> DetectorSummary::category_auroc(Category c) const {
  return collect_category(runs, c, [](const CategoryMetrics& m) { return m.auroc; });
}

std::optional<MeanStd> DetectorSummary::category_fpr(Category c) const {
  return collect_category(runs, c, [](const CategoryMetrics& m) { return m.fpr_at_tpr; });
}

namespace {

std::string percent_cell(const MeanStd& m, bool with_std) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << 100.0 * m.mean;
  if (with_std) {
    os << " ± ";
    if (m.std) {
      os << 100.0 * *m.std;
    } else {
      os << "-";
    }
  }
  return os.str();
}

std::string pad(const std::string& s, std::size_t width) {
  // Count code points so "±" does not skew alignment.
  std::size_t visible = 0;
  for (unsigned char ch : s) {
    if ((ch & 0xC0) != 0x80) ++visible;
  }
  return visible >= width ? s + " " : s + std::string(width - visible, ' ');
}

}  // namespace

std::string format_table(std::span<const DetectorSummary> summaries) {
  bool with_std = false;
  double tpr_target = 0.9;
  for (const auto& s : summaries) {
    if (s.runs.size() > 1) with_std = true;
    if (!s.runs.empty()) tpr_target = s.runs.front().tpr_target;
  }
  std::ostringstream fpr_header;
  fpr_header << "FPR@" << static_cast<int>(std::lround(100.0 * tpr_target)) << "TPR";
  const std::size_t w0 = 16, w = with_std ? 18 : 12;

  std::ostringstream os;
  os << pad("Detector", w0) << pad("AUROC", w) << pad(fpr_header.str(), w) << "\n";
  for (const auto& s : summaries) {
    if (s.runs.empty()) continue;
    os << pad(s.detector, w0) << pad(percent_cell(s.auroc(), with_std), w)
       << pad(percent_cell(s.fpr_at_tpr(), with_std), w) << "\n";
  }

  bool any_category = false;
  for (const auto& s : summaries) {
    if (!s.runs.empty() && !s.runs.front().per_category.empty()) any_category = true;
  }
  if (any_category) {
    os << "\nPer category (positives of the category vs all negatives)\n";
    os << pad("Detector", w0) << pad("Category", 18) << pad("AUROC", w)
       << pad(fpr_header.str(), w) << "\n";
    for (const auto& s : summaries) {
      if (s.runs.empty()) continue;
      for (const auto& [cat, _] : s.runs.front().per_category) {
        auto a = s.category_auroc(cat);
        auto f = s.category_fpr(cat);
        if (!a || !f) continue;
        os << pad(s.detector, w0) << pad(std::string(category_name(cat)), 18)
           << pad(percent_cell(*a, with_std), w) << pad(percent_cell(*f, with_std), w) << "\n";
      }
    }
  }
  return os.str();
}

namespace {

nlohmann::ordered_json mean_std_json(const MeanStd& m) {
  nlohmann::ordered_json j;
  j["mean"] = m.mean;
  j["std"] = m.std ? nlohmann::ordered_json(*m.std) : nullptr;
  return j;
}

nlohmann::ordered_json threshold_json(double t) {
  if (std::isinf(t)) return t < 0 ? "-inf" : "inf";
  return t;
}

}  // namespace

std::string report_to_json(std::span<const DetectorSummary> summaries) {
  nlohmann::ordered_json root = nlohmann::ordered_json::array();
  for (const auto& s : summaries) {
    nlohmann::ordered_json d;
    d["detector"] = s.detector;
    d["n_missing"] = s.n_missing;
    if (!s.runs.empty()) {
      d["auroc"] = mean_std_json(s.auroc());
      d["fpr_at_tpr"] = mean_std_json(s.fpr_at_tpr());
    }
    nlohmann::ordered_json runs = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < s.runs.size(); ++i) {
      const EvaluationReport& r = s.runs[i];
      nlohmann::ordered_json jr;
      if (i < s.seeds.size()) jr["seed"] = s.seeds[i];
      jr["auroc"] = r.auroc;
      jr["fpr_at_tpr"] = r.fpr_at_tpr;
      jr["tpr_target"] = r.tpr_target;
      jr["n_pos"] = r.n_pos;
      jr["n_neg"] = r.n_neg;
      nlohmann::ordered_json cats = nlohmann::ordered_json::object();
      for (const auto& [cat, m] : r.per_category) {
        cats[std::string(category_name(cat))] = {
            {"auroc", m.auroc}, {"fpr_at_tpr", m.fpr_at_tpr}, {"n_pos", m.n_pos}};
      }
      jr["per_category"] = cats;
      jr["notes"] = r.notes;
      jr["roc_points"] = nlohmann::ordered_json::array();
      for (const auto& p : r.roc_points) {
        jr["roc_points"].push_back({p.fpr, p.tpr, threshold_json(p.threshold)});
      }
      runs.push_back(std::move(jr));
    }
    d["runs"] = std::move(runs);
    root.push_back(std::move(d));
  }
  return root.dump(2) + "\n";
}

std::string roc_to_csv(std::span<const DetectorSummary> summaries) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "detector,seed,fpr,tpr,threshold\n";
  for (const auto& s : summaries) {
    for (std::size_t i = 0; i < s.runs.size(); ++i) {
      const std::uint64_t seed = i < s.seeds.size() ? s.seeds[i] : 0;
      for (const auto& p : s.runs[i].roc_points) {
        os << s.detector << "," << seed << "," << p.fpr << "," << p.tpr << ",";
        if (std::isinf(p.threshold)) {
          os << (p.threshold < 0 ? "-inf" : "inf");
        } else {
          os << p.threshold;
        }
        os << "\n";
      }
    }
  }
  return os.str();
}

}  // namespace wassdet
