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

#include "wassdet/record_io.h"

#include <cmath>
#include <fstream>

#include "json.hpp"
#include "wassdet/errors.h"

namespace wassdet {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::size_t positive_size(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
    throw Error(ErrorCode::kParseError, std::string(key) + " must be a positive integer");
  }
  return v.get<std::size_t>();
}

double finite_number(const json& v, const char* what) {
  if (!v.is_number()) throw Error(ErrorCode::kParseError, std::string(what) + " must be numeric");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw Error(ErrorCode::kParseError, std::string(what) + " must be finite");
  return d;
}

std::vector<std::string> string_list(const json& v, const char* what) {
  if (!v.is_array()) throw Error(ErrorCode::kParseError, std::string(what) + " must be an array");
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const auto& s : v) {
    if (!s.is_string()) throw Error(ErrorCode::kParseError, std::string(what) + " must hold strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

}  // namespace

AttentionRecord parse_record(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kParseError, "record must be a JSON object");

  AttentionRecord r;
  try {
    const json& id = j.at("id");
    if (!id.is_string()) throw Error(ErrorCode::kParseError, "id must be a string");
    r.id = id.get<std::string>();
    r.src_len = positive_size(j, "src_len");
    r.tgt_len = positive_size(j, "tgt_len");

    const json& att = j.at("attention");
    if (!att.is_array() || att.empty()) {
      throw Error(ErrorCode::kParseError, "attention must be a non-empty nested array");
    }
    const std::size_t rows = att.size();
    const std::size_t cols = att.front().is_array() ? att.front().size() : 0;
    std::vector<double> values;
    values.reserve(rows * cols);
    for (const auto& row : att) {
      if (!row.is_array()) throw Error(ErrorCode::kParseError, "attention rows must be arrays");
      if (row.size() != cols) {
        throw Error(ErrorCode::kDimensionMismatch, "attention rows have unequal lengths");
      }
      for (const auto& v : row) values.push_back(finite_number(v, "attention value"));
    }
    r.attention = AttentionMatrix(rows, cols, std::move(values));

    if (auto it = j.find("token_logprobs"); it != j.end() && !it->is_null()) {
      if (!it->is_array()) throw Error(ErrorCode::kParseError, "token_logprobs must be an array");
      std::vector<double> lp;
      lp.reserve(it->size());
      for (const auto& v : *it) lp.push_back(finite_number(v, "token_logprobs value"));
      r.token_logprobs = std::move(lp);
    }
    if (auto it = j.find("src_tokens"); it != j.end() && !it->is_null()) {
      r.src_tokens = string_list(*it, "src_tokens");
    }
    if (auto it = j.find("tgt_tokens"); it != j.end() && !it->is_null()) {
      r.tgt_tokens = string_list(*it, "tgt_tokens");
    }
    if (auto it = j.find("quality"); it != j.end() && !it->is_null()) {
      r.quality = finite_number(*it, "quality");
    }
    if (auto it = j.find("label"); it != j.end() && !it->is_null()) {
      if (it->is_boolean()) {
        r.label = it->get<bool>() ? 1 : 0;
      } else if (it->is_number_integer() &&
                 (it->get<std::int64_t>() == 0 || it->get<std::int64_t>() == 1)) {
        r.label = static_cast<int>(it->get<std::int64_t>());
      } else {
        throw Error(ErrorCode::kParseError, "label must be 0 or 1");
      }
    }
    if (auto it = j.find("category"); it != j.end() && !it->is_null()) {
      if (!it->is_string()) throw Error(ErrorCode::kParseError, "category must be a string");
      r.category = parse_category(it->get<std::string>());
      if (!r.category) {
        throw Error(ErrorCode::kParseError, "unknown category " + it->get<std::string>());
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  return r;
}

std::string record_to_json(const AttentionRecord& r) {
  ordered_json j;
  j["id"] = r.id;
  j["src_len"] = r.src_len;
  j["tgt_len"] = r.tgt_len;
  ordered_json att = ordered_json::array();
  for (std::size_t t = 0; t < r.attention.rows(); ++t) {
    auto row = r.attention.row(t);
    att.push_back(std::vector<double>(row.begin(), row.end()));
  }
  j["attention"] = std::move(att);
  if (r.token_logprobs) j["token_logprobs"] = *r.token_logprobs;
  if (r.src_tokens) j["src_tokens"] = *r.src_tokens;
  if (r.tgt_tokens) j["tgt_tokens"] = *r.tgt_tokens;
  if (r.quality) j["quality"] = *r.quality;
  if (r.label) j["label"] = *r.label;
  if (r.category) j["category"] = std::string(category_name(*r.category));
  return j.dump();
}

bool RecordReader::next(AttentionRecord& out) {
  while (std::getline(in_, buf_)) {
    ++line_;
    if (buf_.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out = parse_record(buf_);
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line_) + ": " + e.what());
    }
    return true;
  }
  if (in_.bad()) throw Error(ErrorCode::kIoError, "read error");
  return false;
}

std::vector<AttentionRecord> read_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  RecordReader reader(in);
  std::vector<AttentionRecord> out;
  AttentionRecord r;
  while (reader.next(r)) out.push_back(std::move(r));
  return out;
}

std::string score_line_to_json(const ScoreLine& line,
                               const std::vector<std::string>& detector_order) {
  ordered_json j;
  j["id"] = line.id;
  j["seed"] = line.seed;
  ordered_json scores = ordered_json::object();
  ordered_json flags = ordered_json::object();
  ordered_json errors = ordered_json::object();
  for (const auto& key : detector_order) {
    if (auto it = line.scores.find(key); it != line.scores.end()) scores[key] = it->second;
    if (auto it = line.flags.find(key); it != line.flags.end()) flags[key] = it->second;
    if (auto it = line.errors.find(key); it != line.errors.end()) errors[key] = it->second;
  }
  j["scores"] = std::move(scores);
  j["flags"] = std::move(flags);
  j["warnings"] = line.warnings;
  j["errors"] = std::move(errors);
  return j.dump();
}

ScoreLine parse_score_line(std::string_view text) {
  ScoreLine s;
  try {
    const json j = json::parse(text);
    s.id = j.at("id").get<std::string>();
    s.seed = j.value("seed", std::uint64_t{0});
    for (const auto& [k, v] : j.at("scores").items()) s.scores[k] = v.get<double>();
    if (j.contains("flags")) {
      for (const auto& [k, v] : j["flags"].items()) s.flags[k] = v.get<int>();
    }
    if (j.contains("warnings")) s.warnings = j["warnings"].get<std::vector<std::string>>();
    if (j.contains("errors")) {
      for (const auto& [k, v] : j["errors"].items()) s.errors[k] = v.get<std::string>();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  return s;
}

}  // namespace wassdet
