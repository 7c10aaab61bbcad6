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

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "test_util.h"
#include "wassdet/errors.h"
#include "wassdet/transport.h"

namespace wassdet {
namespace {

using D = SourceMassDistribution;

ReferenceStore one_entry_store(D pi, std::size_t tgt_len) {
  return ReferenceStore({{"ref", std::move(pi), tgt_len, std::nullopt}}, BuildMeta{});
}

TEST(WassToUnif, Examples) {
  EXPECT_EQ(wass_to_unif(D::uniform(5)), 0.0);
  EXPECT_DOUBLE_EQ(wass_to_unif(D::one_hot(4, 2)), 0.75);
  auto pi = D::validated({0.4, 0.4, 0.1, 0.1});
  EXPECT_NEAR(wass_to_unif(pi), 0.3, 1e-15);
  EXPECT_NEAR(zero_one_cost_oracle(pi, D::uniform(4)).total_cost, 0.3, 1e-15);
}

TEST(WassToUnif, OneHotClosedForm) {
  for (std::size_t n = 2; n <= 10; ++n) {
    EXPECT_EQ(tv_distance(D::one_hot(n, 0), D::uniform(n)), 1.0 - 1.0 / static_cast<double>(n));
  }
}

TEST(BottomK, MeansOfSmallest) {
  EXPECT_DOUBLE_EQ(bottom_k_mean({0.5, 0.2, 0.9, 0.4}, 4), 0.5);
  EXPECT_DOUBLE_EQ(bottom_k_mean({0.5, 0.2, 0.9, 0.4, 0.8, 0.7}, 4), 0.45);
  EXPECT_DOUBLE_EQ(bottom_k_mean({0.3}, 4), 0.3);
}

TEST(WassToData, SelfMatchIsZero) {
  auto pi = D::validated({0.1, 0.6, 0.3});
  auto store = one_entry_store(pi, 5);
  DetectorConfig cfg;
  cfg.k = 1;
  auto r = wass_to_data(pi, 5, store, cfg);
  EXPECT_EQ(r.score, 0.0);
  EXPECT_EQ(r.references, 1u);
  EXPECT_FALSE(r.k_shrunk);
}

TEST(WassToData, ShrinksKWhenFewReferences) {
  auto store = one_entry_store(D::uniform(2), 5);
  DetectorConfig cfg;
  auto r = wass_to_data(D::validated({1, 0}), 5, store, cfg);
  EXPECT_TRUE(r.k_shrunk);
  EXPECT_EQ(r.k_used, 1u);
  EXPECT_DOUBLE_EQ(r.score, 0.5);
}

TEST(WassToData, EmptyWindowThrows) {
  auto store = one_entry_store(D::uniform(2), 50);
  try {
    wass_to_data(D::uniform(2), 5, store, DetectorConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyReferenceSet);
  }
}

TEST(WassToData, RandomSelectionIgnoresLength) {
  auto store = one_entry_store(D::uniform(2), 50);
  DetectorConfig cfg;
  cfg.selection = ReferenceSelection::kRandomSampling;
  EXPECT_DOUBLE_EQ(wass_to_data(D::validated({1, 0}), 5, store, cfg).score, 0.5);
}

TEST(WassToData, ZeroOneCostUsesPaddedTv) {
  auto store = one_entry_store(D::validated({0, 0, 1}), 3);
  DetectorConfig cfg;
  cfg.wtd_cost = WtdCost::kZeroOne;
  EXPECT_DOUBLE_EQ(wass_to_data(D::validated({1}), 3, store, cfg).score, 1.0);
  cfg.wtd_cost = WtdCost::kL1;
  EXPECT_DOUBLE_EQ(wass_to_data(D::validated({1}), 3, store, cfg).score, 2.0);
}

TEST(WassToData, MatchesBruteForceOverWindow) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<std::size_t> len(3, 12);
  std::vector<ReferenceEntry> entries;
  for (int i = 0; i < 60; ++i) {
    const std::size_t n = len(rng);
    entries.push_back({"r" + std::to_string(i), testing::random_simplex(rng, n), n, std::nullopt});
  }
  ReferenceStore store(entries, BuildMeta{});
  DetectorConfig cfg;
  cfg.delta = 0.3;
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t m = len(rng);
    auto pi = testing::random_simplex(rng, m);
    std::vector<double> d;
    const auto [lo, hi] = length_window(m, cfg.delta);
    for (const auto& e : entries) {
      if (e.tgt_len >= lo && e.tgt_len <= hi) d.push_back(wasserstein1(pi, e.pi, cfg.alignment));
    }
    if (d.empty()) continue;
    std::sort(d.begin(), d.end());
    const std::size_t k = std::min<std::size_t>(cfg.k, d.size());
    double want = 0.0;
    for (std::size_t i = 0; i < k; ++i) want += d[i];
    want /= static_cast<double>(k);
    EXPECT_NEAR(wass_to_data(pi, m, store, cfg).score, want, 1e-12);
  }
}

CalibrationParams unit_params() {
  CalibrationParams p;
  p.tau_wtu = 0.5;
  p.wtu_min = 0.0;
  p.wtu_max = 1.0;
  p.wtd_min = 0.0;
  p.wtd_max = 0.4;
  return p;
}

TEST(WassCombo, TauIsStrict) {
  auto pi = D::validated({0.7, 0.3});
  auto store = one_entry_store(D::uniform(2), 2);
  DetectorConfig cfg;
  CalibrationParams params = unit_params();
  params.tau_wtu = wass_to_unif(pi);
  auto r = wass_combo(pi, 2, store, cfg, params);
  EXPECT_FALSE(r.stage_one);
  ASSERT_TRUE(r.wtd.has_value());
  EXPECT_EQ(r.score, r.wtd->score);
}

TEST(WassCombo, OneHotTakesFirstBranch) {
  auto pi = D::one_hot(4, 0);
  auto store = one_entry_store(D::uniform(4), 99);  // empty window: never consulted
  CalibrationParams params = unit_params();
  auto r = wass_combo(pi, 4, store, DetectorConfig{}, params);
  EXPECT_TRUE(r.stage_one);
  EXPECT_FALSE(r.wtd.has_value());
  EXPECT_EQ(r.score, scale_wtu(0.75, params));
}

TEST(WassCombo, UniformTakesSecondBranch) {
  auto store = one_entry_store(D::validated({1, 0}), 2);
  auto r = wass_combo(D::uniform(2), 2, store, DetectorConfig{}, unit_params());
  EXPECT_FALSE(r.stage_one);
  EXPECT_EQ(r.s_wtu, 0.0);
  EXPECT_DOUBLE_EQ(r.score, 0.5);
}

TEST(WassCombo, SecondBranchPropagatesEmptyReferenceSet) {
  auto store = one_entry_store(D::uniform(2), 99);
  EXPECT_THROW(wass_combo(D::uniform(2), 2, store, DetectorConfig{}, unit_params()), Error);
}

TEST(ConvexCombo, Endpoints) {
  // wtd = |1 - 0.6| = 0.4, wtu = 0.5 scales to 0.2.
  auto pi = D::validated({1, 0});
  auto store = one_entry_store(D::validated({0.6, 0.4}), 2);
  DetectorConfig cfg;
  cfg.k = 1;
  const auto params = unit_params();
  const double wtd = wass_to_data(pi, 2, store, cfg).score;
  EXPECT_DOUBLE_EQ(wtd, 0.4);
  EXPECT_EQ(convex_combo(pi, 2, store, cfg, params, 1.0), wtd);
  EXPECT_EQ(convex_combo(pi, 2, store, cfg, params, 0.0), scale_wtu(0.5, params));
  EXPECT_DOUBLE_EQ(convex_combo(pi, 2, store, cfg, params, 0.5), 0.3);
  EXPECT_THROW(convex_combo(pi, 2, store, cfg, params, 1.5), Error);
}

TEST(AttnIgnSrc, Examples) {
  auto identity = testing::make_record("i", 3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1});
  EXPECT_EQ(attn_ign_src(identity, 0.2), 0.0);
  auto last = testing::make_record("l", 2, 5, {0, 0, 0, 0, 1, 0, 0, 0, 0, 1});
  EXPECT_DOUBLE_EQ(attn_ign_src(last, 0.2), 0.8);
  EXPECT_EQ(attn_ign_src(last, 0.0), 0.0);
}

TEST(SeqLogprob, Examples) {
  auto r = testing::uniform_record("s", 3, 2);
  r.token_logprobs = std::vector<double>{0, 0, 0};
  EXPECT_EQ(seq_logprob(r), 0.0);
  r.token_logprobs = std::vector<double>{-1, -2, -3};
  EXPECT_DOUBLE_EQ(seq_logprob(r), -2.0);
  r.token_logprobs = std::vector<double>{-0.1};
  EXPECT_DOUBLE_EQ(seq_logprob(r), -0.1);
  r.token_logprobs.reset();
  try {
    seq_logprob(r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingLogprobs);
  }
}

std::vector<std::string> words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

TEST(TopNgram, Examples) {
  auto src = words("a b c d e f g h");
  auto tgt = words("x y z w x y z w x y z w x y z w");
  EXPECT_EQ(max_ngram_count(tgt, 4), 4u);
  EXPECT_EQ(max_ngram_count(src, 4), 1u);
  EXPECT_TRUE(top_ngram_heuristic(src, tgt));
  EXPECT_FALSE(top_ngram_heuristic(src, src));
  EXPECT_FALSE(top_ngram_heuristic(src, words("x y z")));
  // Three repeats is exactly one short of the margin.
  EXPECT_FALSE(top_ngram_heuristic(words("a b c d a b c d"), words("x y z w x y z w x y z w")));
}

TEST(Config, Validation) {
  EXPECT_NO_THROW(DetectorConfig{}.validate());
  auto bad = [](auto mutate) {
    DetectorConfig c;
    mutate(c);
    try {
      c.validate();
      return false;
    } catch (const Error& e) {
      return e.code() == ErrorCode::kInvalidConfig;
    }
  };
  EXPECT_TRUE(bad([](DetectorConfig& c) { c.delta = 0.0; }));
  EXPECT_TRUE(bad([](DetectorConfig& c) { c.delta = 1.0; }));
  EXPECT_TRUE(bad([](DetectorConfig& c) { c.k = 0; }));
  EXPECT_TRUE(bad([](DetectorConfig& c) { c.r_max = 0; }));
  EXPECT_TRUE(bad([](DetectorConfig& c) { c.percentile_k = 98.0; }));
  EXPECT_TRUE(bad([](DetectorConfig& c) { c.percentile_k = 100.0; }));
  EXPECT_TRUE(bad([](DetectorConfig& c) { c.ais_lambda = -0.1; }));
}

TEST(Config, FingerprintIgnoresSeedOnly) {
  DetectorConfig a;
  DetectorConfig b;
  b.seed = 42;
  EXPECT_EQ(config_fingerprint(a), config_fingerprint(b));
  b.delta = 0.2;
  EXPECT_NE(config_fingerprint(a), config_fingerprint(b));
  DetectorConfig c;
  c.selection = ReferenceSelection::kRandomSampling;
  EXPECT_NE(config_fingerprint(a), config_fingerprint(c));
}

TEST(Registry, KeysAndOrientation) {
  EXPECT_EQ(all_detectors().size(), 7u);
  for (const auto& d : all_detectors()) EXPECT_EQ(parse_detector(d.key), d.kind);
  EXPECT_EQ(detector_info(DetectorKind::kSlp).orientation, Orientation::kNegate);
  EXPECT_EQ(anomaly_score(-2.0, Orientation::kNegate), 2.0);
  EXPECT_FALSE(parse_detector("bogus").has_value());
}

}  // namespace
}  // namespace wassdet
