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

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wassdet/detectors.h"
#include "wassdet/errors.h"
#include "wassdet/record_io.h"
#include "wassdet/store.h"

namespace wassdet {

// Exit statuses shared by every subcommand. Usage and config errors share
// kExitParse.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitInvariant = 3;
inline constexpr int kExitIo = 4;

int exit_code_for(ErrorCode code);

struct ScoringOptions {
  DetectorConfig cfg;
  std::vector<DetectorKind> detectors;
  const ReferenceStore* store = nullptr;          // wtd, combo, convex
  std::optional<CalibrationParams> calibration;  // combo, convex
  double convex_lambda = 0.5;
  std::size_t ngram_n = 4;
  std::size_t ngram_margin = 2;
  std::size_t threads = 1;
};

/// Scores one record with every selected detector. Failures are recorded in
/// the line's `errors` map and never thrown.
ScoreLine score_record(const AttentionRecord& record, const ScoringOptions& opts);

/// Scores a batch on `opts.threads` workers; output order equals input order.
std::vector<ScoreLine> score_records(std::span<const AttentionRecord> records,
                                     const ScoringOptions& opts);

/// Runs `fn(i)` for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

/// Entry point of the `wassdet` tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wassdet
