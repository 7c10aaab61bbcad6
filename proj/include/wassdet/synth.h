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
#include <vector>

#include "wassdet/attention.h"

namespace wassdet {

/// Shape of the synthetic benchmark corpus.
///
/// Good translations attend along a noisy diagonal (Gaussian band plus
/// Dirichlet noise). Detached hallucinations put nearly all attention on a
/// single source column. Oscillatory hallucinations repeat a whole diagonal
/// sweep two or three times, which inflates the translation length while
/// keeping the source mass close to uniform.
struct SynthConfig {
  std::size_t n_good = 2000;
  std::size_t n_peaked = 30;
  std::size_t n_oscillatory = 30;
  std::size_t n_held = 2000;  // good-only reference corpus
  std::uint64_t seed = 1;
};

struct SynthCorpus {
  std::vector<AttentionRecord> held;  // unlabelled, with quality scores
  std::vector<AttentionRecord> test;  // labelled, with categories on positives
};

SynthCorpus generate_synthetic_corpus(const SynthConfig& cfg);

}  // namespace wassdet
