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

#include "wassdet/detectors.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

#include <zlib.h>

#include "wassdet/errors.h"

namespace wassdet {

std::string_view wtd_cost_name(WtdCost c) {
  return c == WtdCost::kL1 ? "l1" : "zero-one";
}

std::optional<WtdCost> parse_wtd_cost(std::string_view name) {
  if (name == "l1") return WtdCost::kL1;
  if (name == "zero-one") return WtdCost::kZeroOne;
  return std::nullopt;
}

std::string_view selection_name(ReferenceSelection s) {
  return s == ReferenceSelection::kLengthFilter ? "length-filter" : "random";
}

std::optional<ReferenceSelection> parse_selection(std::string_view name) {
  if (name == "length-filter") return ReferenceSelection::kLengthFilter;
  if (name == "random") return ReferenceSelection::kRandomSampling;
  return std::nullopt;
}

void DetectorConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvalidConfig, what); };
  if (!(delta > 0.0 && delta < 1.0)) fail("delta must lie in (0, 1)");
  if (k < 1) fail("k must be >= 1");
  if (r_max < k) fail("r_max must be >= k");
  if (!(percentile_k > 98.0 && percentile_k < 100.0)) {
    fail("percentile_K must lie in (98, 100)");
  }
  if (!(ais_lambda > 0.0 && ais_lambda < 1.0)) fail("ais_lambda must lie in (0, 1)");
}

std::string config_fingerprint(const DetectorConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  os << "delta=" << cfg.delta << ";r_max=" << cfg.r_max << ";k=" << cfg.k
     << ";percentile_k=" << cfg.percentile_k << ";alignment=" << alignment_name(cfg.alignment)
     << ";wtd_cost=" << wtd_cost_name(cfg.wtd_cost)
     << ";selection=" << selection_name(cfg.selection);
  const std::string s = os.str();
  const uLong crc = crc32(crc32(0L, Z_NULL, 0), reinterpret_cast<const Bytef*>(s.data()),
                          static_cast<uInt>(s.size()));
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08lx", static_cast<unsigned long>(crc));
  return buf;
}

double wass_to_unif(const SourceMassDistribution& pi) {
  return tv_distance(pi, SourceMassDistribution::uniform(pi.size()));
}

double bottom_k_mean(std::vector<double> values, std::size_t k) {
  if (values.empty()) throw Error(ErrorCode::kInvalidArgument, "no values to average");
  const std::size_t used = std::min(k, values.size());
  std::partial_sort(values.begin(), values.begin() + static_cast<long>(used), values.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < used; ++i) sum += values[i];
  return sum / static_cast<double>(used);
}

double reference_distance(const SourceMassDistribution& pi,
                          const SourceMassDistribution& ref, const DetectorConfig& cfg) {
  if (cfg.wtd_cost == WtdCost::kZeroOne) return padded_tv_distance(pi, ref);
  return wasserstein1(pi, ref, cfg.alignment);
}

WassToDataResult wass_to_data(const SourceMassDistribution& pi, std::size_t m,
                              const ReferenceStore& store, const DetectorConfig& cfg) {
  const std::span<const ReferenceEntry> candidates =
      cfg.selection == ReferenceSelection::kLengthFilter
          ? length_filter(store, m, cfg.delta)
          : store.entries();
  if (candidates.empty()) {
    const auto [lo, hi] = length_window(m, cfg.delta);
    std::ostringstream os;
    os << "no reference with tgt_len in [" << lo << ", " << hi << "]";
    throw Error(ErrorCode::kEmptyReferenceSet, os.str());
  }
  const auto refs = sample_reference_set(candidates, cfg.r_max, cfg.seed);
  std::vector<double> distances;
  distances.reserve(refs.size());
  for (const ReferenceEntry* r : refs) distances.push_back(reference_distance(pi, r->pi, cfg));

  WassToDataResult out;
  out.references = distances.size();
  out.k_used = std::min(cfg.k, distances.size());
  out.k_shrunk = out.k_used < cfg.k;
  out.score = bottom_k_mean(std::move(distances), cfg.k);
  return out;
}

ComboResult wass_combo(const SourceMassDistribution& pi, std::size_t m,
                       const ReferenceStore& store, const DetectorConfig& cfg,
                       const CalibrationParams& params) {
  ComboResult out;
  out.s_wtu = wass_to_unif(pi);
  if (exceeds_unif_threshold(out.s_wtu, params)) {
    out.stage_one = true;
    out.score = scale_wtu(out.s_wtu, params);
    return out;
  }
  out.wtd = wass_to_data(pi, m, store, cfg);
  out.score = out.wtd->score;
  return out;
}

double convex_combo(const SourceMassDistribution& pi, std::size_t m,
                    const ReferenceStore& store, const DetectorConfig& cfg,
                    const CalibrationParams& params, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "convex lambda must lie in [0, 1]");
  }
  const double scaled = scale_wtu(wass_to_unif(pi), params);
  if (lambda == 0.0) return scaled;
  const double wtd = wass_to_data(pi, m, store, cfg).score;
  if (lambda == 1.0) return wtd;
  return lambda * wtd + (1.0 - lambda) * scaled;
}

double attn_ign_src(const AttentionRecord& record, double lambda) {
  const std::vector<double> incoming = column_sums(record.attention);
  if (incoming.empty()) throw Error(ErrorCode::kDimensionMismatch, "empty attention");
  const auto ignored = std::count_if(incoming.begin(), incoming.end(),
                                     [lambda](double v) { return v < lambda; });
  return static_cast<double>(ignored) / static_cast<double>(incoming.size());
}

double seq_logprob(const AttentionRecord& record) {
  if (!record.token_logprobs || record.token_logprobs->empty()) {
    throw Error(ErrorCode::kMissingLogprobs, "record " + record.id + " has no token_logprobs");
  }
  const auto& lp = *record.token_logprobs;
  return std::accumulate(lp.begin(), lp.end(), 0.0) / static_cast<double>(lp.size());
}

std::size_t max_ngram_count(std::span<const std::string> tokens, std::size_t n) {
  if (n == 0 || tokens.size() < n) return 0;
  std::map<std::vector<std::string_view>, std::size_t> counts;
  std::size_t best = 0;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::vector<std::string_view> gram(tokens.begin() + static_cast<long>(i),
                                       tokens.begin() + static_cast<long>(i + n));
    best = std::max(best, ++counts[std::move(gram)]);
  }
  return best;
}

bool top_ngram_heuristic(std::span<const std::string> src_tokens,
                         std::span<const std::string> tgt_tokens, std::size_t n_gram,
                         std::size_t margin) {
  return max_ngram_count(tgt_tokens, n_gram) >= max_ngram_count(src_tokens, n_gram) + margin;
}

namespace {

constexpr std::array<DetectorInfo, 7> kDetectors = {{
    {DetectorKind::kWtu, "wtu", "Wass-to-Unif", Orientation::kHigherIsAnomalous},
    {DetectorKind::kWtd, "wtd", "Wass-to-Data", Orientation::kHigherIsAnomalous},
    {DetectorKind::kCombo, "combo", "Wass-Combo", Orientation::kHigherIsAnomalous},
    {DetectorKind::kConvex, "convex", "Wass-Convex", Orientation::kHigherIsAnomalous},
    {DetectorKind::kAis, "ais", "Attn-ign-SRC", Orientation::kHigherIsAnomalous},
    {DetectorKind::kSlp, "slp", "Seq-Logprob", Orientation::kNegate},
    {DetectorKind::kNgram, "ngram", "Top n-gram", Orientation::kHigherIsAnomalous},
}};

}  // namespace

std::span<const DetectorInfo> all_detectors() { return kDetectors; }

const DetectorInfo& detector_info(DetectorKind kind) {
  for (const auto& d : kDetectors) {
    if (d.kind == kind) return d;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown detector kind");
}

std::optional<DetectorKind> parse_detector(std::string_view key) {
  for (const auto& d : kDetectors) {
    if (d.key == key) return d.kind;
  }
  return std::nullopt;
}

}  // namespace wassdet
