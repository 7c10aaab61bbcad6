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

#include "wassdet/attention.h"

#include <cmath>
#include <numeric>
#include <sstream>

#include "wassdet/errors.h"

namespace wassdet {

std::string_view category_name(Category c) {
  switch (c) {
    case Category::kFullyDetached: return "FullyDetached";
    case Category::kStronglyDetached: return "StronglyDetached";
    case Category::kOscillatory: return "Oscillatory";
    case Category::kOther: return "Other";
  }
  return "Other";
}

std::optional<Category> parse_category(std::string_view name) {
  for (Category c : {Category::kFullyDetached, Category::kStronglyDetached,
                     Category::kOscillatory, Category::kOther}) {
    if (category_name(c) == name) return c;
  }
  return std::nullopt;
}

AttentionMatrix::AttentionMatrix(std::size_t rows, std::size_t cols,
                                 std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    std::ostringstream os;
    os << "attention has " << values_.size() << " values, expected " << rows_
       << "x" << cols_;
    throw Error(ErrorCode::kDimensionMismatch, os.str());
  }
}

SourceMassDistribution SourceMassDistribution::normalized(std::vector<double> mass,
                                                          double tolerance) {
  if (mass.empty()) {
    throw Error(ErrorCode::kNotADistribution, "empty support");
  }
  double total = 0.0;
  for (double v : mass) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorCode::kNotADistribution, "negative or non-finite mass");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > tolerance) {
    std::ostringstream os;
    os << "mass sums to " << total;
    throw Error(ErrorCode::kNotADistribution, os.str());
  }
  if (total != 1.0) {
    for (double& v : mass) v /= total;
  }
  return SourceMassDistribution(std::move(mass));
}

SourceMassDistribution SourceMassDistribution::validated(std::vector<double> mass) {
  if (mass.empty()) {
    throw Error(ErrorCode::kNotADistribution, "empty support");
  }
  double total = 0.0;
  for (double v : mass) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorCode::kNotADistribution, "negative or non-finite mass");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > kSimplexTolerance) {
    std::ostringstream os;
    os << "mass sums to " << total;
    throw Error(ErrorCode::kNotADistribution, os.str());
  }
  return SourceMassDistribution(std::move(mass));
}

SourceMassDistribution SourceMassDistribution::uniform(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "uniform over empty support");
  return SourceMassDistribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

SourceMassDistribution SourceMassDistribution::one_hot(std::size_t n, std::size_t index) {
  if (index >= n) throw Error(ErrorCode::kInvalidArgument, "one-hot index out of range");
  std::vector<double> mass(n, 0.0);
  mass[index] = 1.0;
  return SourceMassDistribution(std::move(mass));
}

std::string_view violation_kind_name(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kNonPositiveLength: return "NonPositiveLength";
    case ViolationKind::kDimensionMismatch: return "DimensionMismatch";
    case ViolationKind::kNonFiniteEntry: return "NonFiniteEntry";
    case ViolationKind::kEntryOutOfRange: return "EntryOutOfRange";
    case ViolationKind::kRowSumViolation: return "RowSumViolation";
    case ViolationKind::kLogprobLengthMismatch: return "LogprobLengthMismatch";
    case ViolationKind::kLogprobPositive: return "LogprobPositive";
    case ViolationKind::kLabelOutOfRange: return "LabelOutOfRange";
  }
  return "Unknown";
}

std::string Violation::to_string() const {
  std::ostringstream os;
  os << violation_kind_name(kind);
  if (row) os << "(row=" << *row << ")";
  os << " [" << field << "] " << detail;
  return os.str();
}

std::vector<Violation> validate_record(const AttentionRecord& record) {
  std::vector<Violation> out;
  if (record.src_len == 0) {
    out.push_back({ViolationKind::kNonPositiveLength, "src_len", "must be >= 1", {}});
  }
  if (record.tgt_len == 0) {
    out.push_back({ViolationKind::kNonPositiveLength, "tgt_len", "must be >= 1", {}});
  }
  const AttentionMatrix& a = record.attention;
  if (a.rows() != record.tgt_len || a.cols() != record.src_len) {
    std::ostringstream os;
    os << "attention is " << a.rows() << "x" << a.cols() << ", lengths say "
       << record.tgt_len << "x" << record.src_len;
    out.push_back({ViolationKind::kDimensionMismatch, "attention", os.str(), {}});
  } else {
    for (std::size_t t = 0; t < a.rows(); ++t) {
      double sum = 0.0;
      bool finite = true;
      bool in_range = true;
      for (double v : a.row(t)) {
        if (!std::isfinite(v)) {
          finite = false;
          continue;
        }
        if (v < 0.0 || v > 1.0 + kEntryUpperSlack) in_range = false;
        sum += v;
      }
      if (!finite) {
        out.push_back({ViolationKind::kNonFiniteEntry, "attention", "non-finite entry", t});
        continue;
      }
      if (!in_range) {
        out.push_back({ViolationKind::kEntryOutOfRange, "attention",
                       "entry outside [0, 1]", t});
      }
      if (std::abs(sum - 1.0) > kRowSumTolerance) {
        std::ostringstream os;
        os << "row sums to " << sum;
        out.push_back({ViolationKind::kRowSumViolation, "attention", os.str(), t});
      }
    }
  }
  if (record.token_logprobs) {
    const auto& lp = *record.token_logprobs;
    if (lp.size() != record.tgt_len) {
      std::ostringstream os;
      os << "has " << lp.size() << " entries, tgt_len is " << record.tgt_len;
      out.push_back({ViolationKind::kLogprobLengthMismatch, "token_logprobs", os.str(), {}});
    }
    for (double v : lp) {
      if (!(v <= 0.0)) {
        out.push_back({ViolationKind::kLogprobPositive, "token_logprobs",
                       "log-probabilities must be <= 0", {}});
        break;
      }
    }
  }
  if (record.label && *record.label != 0 && *record.label != 1) {
    out.push_back({ViolationKind::kLabelOutOfRange, "label", "must be 0 or 1", {}});
  }
  return out;
}

std::vector<double> column_sums(const AttentionMatrix& attention) {
  std::vector<double> sums(attention.cols(), 0.0);
  for (std::size_t t = 0; t < attention.rows(); ++t) {
    auto row = attention.row(t);
    for (std::size_t j = 0; j < sums.size(); ++j) sums[j] += row[j];
  }
  return sums;
}

SourceMassDistribution compute_source_mass(const AttentionRecord& record) {
  for (const Violation& v : validate_record(record)) {
    switch (v.kind) {
      case ViolationKind::kNonPositiveLength:
      case ViolationKind::kDimensionMismatch:
        throw Error(ErrorCode::kDimensionMismatch, record.id + ": " + v.to_string());
      case ViolationKind::kNonFiniteEntry:
      case ViolationKind::kEntryOutOfRange:
      case ViolationKind::kRowSumViolation:
        throw Error(ErrorCode::kNotADistribution, record.id + ": " + v.to_string());
      default:
        // Logprob and label problems do not affect the attention mass.
        break;
    }
  }
  std::vector<double> mass = column_sums(record.attention);
  const double m = static_cast<double>(record.tgt_len);
  for (double& v : mass) v /= m;
  return SourceMassDistribution::normalized(std::move(mass), kRowSumTolerance);
}

}  // namespace wassdet
