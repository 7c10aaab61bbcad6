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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wassdet/attention.h"
#include "wassdet/store.h"
#include "wassdet/transport.h"

namespace wassdet {

/// Ground cost used when comparing a test distribution against references.
enum class WtdCost { kL1, kZeroOne };

/// How the reference set for a test sample is drawn from the store.
enum class ReferenceSelection {
  kLengthFilter,    // restrict to similar translation lengths, then sample
  kRandomSampling,  // ignore lengths, sample from the whole store
};

std::string_view wtd_cost_name(WtdCost c);
std::optional<WtdCost> parse_wtd_cost(std::string_view name);
std::string_view selection_name(ReferenceSelection s);
std::optional<ReferenceSelection> parse_selection(std::string_view name);

struct DetectorConfig {
  double delta = 0.1;
  std::size_t r_max = 1000;
  std::size_t k = 4;
  double percentile_k = 99.9;
  double ais_lambda = 0.2;
  SupportAlignment alignment = SupportAlignment::kPadToCommonLength;
  std::uint64_t seed = 0;
  WtdCost wtd_cost = WtdCost::kL1;
  ReferenceSelection selection = ReferenceSelection::kLengthFilter;

  /// Throws InvalidConfig naming the first violated constraint.
  void validate() const;
};

/// Stable digest of every field that changes Wass-to-Data scores, except the
/// seed (multi-seed runs share one calibration).
std::string config_fingerprint(const DetectorConfig& cfg);

/// Total variation distance between pi and the uniform distribution on its
/// support; the optimal transport cost under the 0/1 ground cost.
double wass_to_unif(const SourceMassDistribution& pi);

struct WassToDataResult {
  double score = 0.0;
  std::size_t references = 0;  // |R_x|
  std::size_t k_used = 0;
  bool k_shrunk = false;  // fewer than k references were available
};

/// Mean of the `k` smallest values; uses all of them when there are fewer.
double bottom_k_mean(std::vector<double> values, std::size_t k);

/// Distance between a test distribution and one reference under cfg.
double reference_distance(const SourceMassDistribution& pi,
                          const SourceMassDistribution& ref, const DetectorConfig& cfg);

/// Mean of the bottom-k distances from pi to a sampled, length-filtered
/// reference set. Throws EmptyReferenceSet when no reference survives the
/// length filter.
WassToDataResult wass_to_data(const SourceMassDistribution& pi, std::size_t m,
                              const ReferenceStore& store, const DetectorConfig& cfg);

/// Fitted scalars for the two-stage detector.
struct CalibrationParams {
  double tau_wtu = 0.0;
  double wtu_min = 0.0;
  double wtu_max = 0.0;
  double wtd_min = 0.0;
  double wtd_max = 0.0;
  std::optional<double> decision_threshold;
  std::string config_fingerprint;
  std::size_t n_wtu = 0;
  std::size_t n_wtd = 0;

  /// Throws InvalidConfig if the bounds are inconsistent.
  void validate() const;

  bool operator==(const CalibrationParams&) const = default;
};

/// Linear interpolation between closest ranks: h = (N-1) K / 100.
double percentile(std::span<const double> values, double k);

/// tau_wtu = percentile(wtu, K); scaling bounds are the observed extrema.
/// Throws EmptyScores if either list is empty.
CalibrationParams calibrate(std::span<const double> store_scores_wtu,
                            std::span<const double> store_scores_wtd,
                            const DetectorConfig& cfg);

/// Affine map of the held-out wtu range onto the held-out wtd range. Values
/// outside the range extrapolate.
double scale_wtu(double s_wtu, const CalibrationParams& params);

/// Stage-one predicate; strict, so s_wtu == tau_wtu goes to stage two.
inline bool exceeds_unif_threshold(double s_wtu, const CalibrationParams& params) {
  return s_wtu > params.tau_wtu;
}

struct ComboResult {
  double score = 0.0;
  bool stage_one = false;
  double s_wtu = 0.0;
  std::optional<WassToDataResult> wtd;  // set only on the second branch
};

/// Two-stage detector: scaled Wass-to-Unif when it exceeds tau_wtu, otherwise
/// Wass-to-Data (which is then the only branch that can throw).
ComboResult wass_combo(const SourceMassDistribution& pi, std::size_t m,
                       const ReferenceStore& store, const DetectorConfig& cfg,
                       const CalibrationParams& params);

/// lambda * s_wtd + (1 - lambda) * scale_wtu(s_wtu).
double convex_combo(const SourceMassDistribution& pi, std::size_t m,
                    const ReferenceStore& store, const DetectorConfig& cfg,
                    const CalibrationParams& params, double lambda);

/// Fraction of source tokens whose total incoming attention (column sum, not
/// normalized by m) is strictly below lambda.
double attn_ign_src(const AttentionRecord& record, double lambda);

/// Length-normalised sequence log-probability. A confidence score: lower is
/// more anomalous. Throws MissingLogprobs.
double seq_logprob(const AttentionRecord& record);

/// Count of the most frequent n-gram; 0 for sequences shorter than n.
std::size_t max_ngram_count(std::span<const std::string> tokens, std::size_t n);

/// True iff the top target n-gram count is at least the top source n-gram
/// count plus margin.
bool top_ngram_heuristic(std::span<const std::string> src_tokens,
                         std::span<const std::string> tgt_tokens, std::size_t n_gram = 4,
                         std::size_t margin = 2);

enum class Orientation { kHigherIsAnomalous, kNegate };

enum class DetectorKind { kWtu, kWtd, kCombo, kConvex, kAis, kSlp, kNgram };

struct DetectorInfo {
  DetectorKind kind;
  std::string_view key;
  std::string_view display_name;
  Orientation orientation;
};

std::span<const DetectorInfo> all_detectors();
const DetectorInfo& detector_info(DetectorKind kind);
std::optional<DetectorKind> parse_detector(std::string_view key);

/// Converts a raw detector output into anomaly orientation.
inline double anomaly_score(double raw, Orientation o) {
  return o == Orientation::kNegate ? -raw : raw;
}

}  // namespace wassdet
