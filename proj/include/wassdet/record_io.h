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
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wassdet/attention.h"

namespace wassdet {

/// Parses one RecordFile line:
///   {"id", "src_len", "tgt_len", "attention": [[...] x m], "token_logprobs"?,
///    "src_tokens"?, "tgt_tokens"?, "quality"?, "label"?, "category"?}
/// Throws ParseError for malformed JSON or wrong types and DimensionMismatch
/// for ragged attention rows. Does not check the attention invariants; call
/// validate_record for that.
AttentionRecord parse_record(std::string_view line);

/// Single-line JSON encoding of a record (no trailing newline).
std::string record_to_json(const AttentionRecord& record);

/// Reads a RecordFile line by line, skipping blank lines. Errors are
/// rethrown with the 1-based line number prepended.
class RecordReader {
 public:
  explicit RecordReader(std::istream& in) : in_(in) {}

  /// False at end of input.
  bool next(AttentionRecord& out);
  std::size_t line_number() const { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
  std::string buf_;
};

std::vector<AttentionRecord> read_records(const std::string& path);

/// One line of a score file.
struct ScoreLine {
  std::string id;
  std::uint64_t seed = 0;
  std::map<std::string, double> scores;
  std::map<std::string, int> flags;
  std::vector<std::string> warnings;
  std::map<std::string, std::string> errors;  // detector -> message

  bool operator==(const ScoreLine&) const = default;
};

/// `detector_order` fixes the key order of scores/flags/errors in the output
/// so files are byte-stable.
std::string score_line_to_json(const ScoreLine& line,
                               const std::vector<std::string>& detector_order);
ScoreLine parse_score_line(std::string_view text);

}  // namespace wassdet
