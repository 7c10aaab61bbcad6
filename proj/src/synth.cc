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

#include "wassdet/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

namespace wassdet {

namespace {

constexpr std::size_t kMinSrc = 6;
constexpr std::size_t kMaxSrc = 40;
constexpr std::size_t kMaxOscSrc = 13;
constexpr std::size_t kMaxOscTgt = 40;
constexpr double kBandWidth = 0.8;
constexpr double kBandWeight = 0.85;
constexpr double kPeakWeight = 0.9;
constexpr double kNoiseConcentration = 0.5;
constexpr std::size_t kVocab = 500;

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  std::size_t uniform_int(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }

  std::vector<double> dirichlet(std::size_t n, double alpha) {
    std::gamma_distribution<double> gamma(alpha, 1.0);
    std::vector<double> v(n);
    double total = 0.0;
    for (auto& x : v) total += (x = gamma(rng_));
    if (total <= 0.0) return std::vector<double>(n, 1.0 / static_cast<double>(n));
    for (auto& x : v) x /= total;
    return v;
  }

  // Gaussian band around `center`, mixed with Dirichlet noise.
  std::vector<double> band_row(std::size_t n, double center) {
    std::vector<double> row(n);
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = (static_cast<double>(j) - center) / kBandWidth;
      total += (row[j] = std::exp(-0.5 * d * d));
    }
    const auto noise = dirichlet(n, kNoiseConcentration);
    for (std::size_t j = 0; j < n; ++j) {
      row[j] = kBandWeight * row[j] / total + (1.0 - kBandWeight) * noise[j];
    }
    return row;
  }

  std::vector<double> peaked_row(std::size_t n, std::size_t peak) {
    auto row = dirichlet(n, kNoiseConcentration);
    for (auto& x : row) x *= 1.0 - kPeakWeight;
    row[peak] += kPeakWeight;
    return row;
  }

  // One monotone pass over the source in `steps` decoding steps.
  std::vector<std::vector<double>> diagonal_sweep(std::size_t n, std::size_t steps) {
    std::vector<std::vector<double>> rows;
    rows.reserve(steps);
    for (std::size_t t = 0; t < steps; ++t) {
      const double center = steps > 1 ? static_cast<double>(t) * static_cast<double>(n - 1) /
                                             static_cast<double>(steps - 1)
                                       : 0.0;
      rows.push_back(band_row(n, center));
    }
    return rows;
  }

  std::vector<std::string> tokens(std::size_t len) {
    std::vector<std::string> out;
    out.reserve(len);
    for (std::size_t i = 0; i < len; ++i) out.push_back("w" + std::to_string(uniform_int(0, kVocab - 1)));
    return out;
  }

  std::vector<double> logprobs(std::size_t len, double mean_surprise) {
    std::exponential_distribution<double> surprise(1.0 / mean_surprise);
    std::vector<double> out(len);
    for (auto& x : out) x = -surprise(rng_);
    return out;
  }

 private:
  std::mt19937_64 rng_;
};

std::string make_id(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s-%05zu", prefix, i);
  return buf;
}

AttentionMatrix to_matrix(const std::vector<std::vector<double>>& rows, std::size_t n) {
  std::vector<double> flat;
  flat.reserve(rows.size() * n);
  for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
  return AttentionMatrix(rows.size(), n, std::move(flat));
}

std::size_t translation_length(Generator& g, std::size_t n) {
  const double ratio = g.uniform(0.9, 1.2);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(ratio * static_cast<double>(n))));
}

AttentionRecord good_record(Generator& g, std::string id) {
  AttentionRecord r;
  r.id = std::move(id);
  r.src_len = g.uniform_int(kMinSrc, kMaxSrc);
  r.tgt_len = translation_length(g, r.src_len);
  r.attention = to_matrix(g.diagonal_sweep(r.src_len, r.tgt_len), r.src_len);
  r.token_logprobs = g.logprobs(r.tgt_len, 0.3);
  r.src_tokens = g.tokens(r.src_len);
  r.tgt_tokens = g.tokens(r.tgt_len);
  r.quality = g.uniform(0.5, 1.0);
  return r;
}

AttentionRecord peaked_record(Generator& g, std::string id) {
  AttentionRecord r;
  r.id = std::move(id);
  r.src_len = g.uniform_int(kMinSrc, kMaxSrc);
  r.tgt_len = translation_length(g, r.src_len);
  // Half of the detached samples stare at the final (end-of-sequence) token.
  const std::size_t peak =
      g.uniform(0.0, 1.0) < 0.5 ? r.src_len - 1 : g.uniform_int(0, r.src_len - 1);
  std::vector<std::vector<double>> rows;
  for (std::size_t t = 0; t < r.tgt_len; ++t) rows.push_back(g.peaked_row(r.src_len, peak));
  r.attention = to_matrix(rows, r.src_len);
  r.token_logprobs = g.logprobs(r.tgt_len, 0.8);
  r.src_tokens = g.tokens(r.src_len);
  r.tgt_tokens = g.tokens(r.tgt_len);
  r.quality = g.uniform(0.0, 0.3);
  r.label = 1;
  r.category = Category::kFullyDetached;
  return r;
}

AttentionRecord oscillatory_record(Generator& g, std::string id) {
  AttentionRecord r;
  r.id = std::move(id);
  r.src_len = g.uniform_int(kMinSrc, kMaxOscSrc);
  const std::size_t block = translation_length(g, r.src_len);
  const std::size_t max_repeats = std::max<std::size_t>(2, kMaxOscTgt / block);
  const std::size_t repeats = g.uniform_int(2, std::min<std::size_t>(3, max_repeats));
  r.tgt_len = block * repeats;

  const auto sweep = g.diagonal_sweep(r.src_len, block);
  std::vector<std::vector<double>> rows;
  const auto block_tokens = g.tokens(block);
  std::vector<std::string> tgt;
  for (std::size_t k = 0; k < repeats; ++k) {
    rows.insert(rows.end(), sweep.begin(), sweep.end());
    tgt.insert(tgt.end(), block_tokens.begin(), block_tokens.end());
  }
  r.attention = to_matrix(rows, r.src_len);
  r.token_logprobs = g.logprobs(r.tgt_len, 0.5);
  r.src_tokens = g.tokens(r.src_len);
  r.tgt_tokens = std::move(tgt);
  r.quality = g.uniform(0.0, 0.3);
  r.label = 1;
  r.category = Category::kOscillatory;
  return r;
}

}  // namespace

SynthCorpus generate_synthetic_corpus(const SynthConfig& cfg) {
  SynthCorpus out;
  Generator held_gen(cfg.seed);
  for (std::size_t i = 0; i < cfg.n_held; ++i) {
    out.held.push_back(good_record(held_gen, make_id("held", i)));
  }
  // Separate stream so the test corpus does not depend on n_held.
  Generator g(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  for (std::size_t i = 0; i < cfg.n_good; ++i) {
    auto r = good_record(g, make_id("good", i));
    r.label = 0;
    out.test.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < cfg.n_peaked; ++i) {
    out.test.push_back(peaked_record(g, make_id("detached", i)));
  }
  for (std::size_t i = 0; i < cfg.n_oscillatory; ++i) {
    out.test.push_back(oscillatory_record(g, make_id("oscillatory", i)));
  }
  return out;
}

}  // namespace wassdet
