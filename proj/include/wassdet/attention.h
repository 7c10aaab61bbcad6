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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wassdet {

// Row sums of exported attention are checked against this tolerance; float32
// exports routinely drift by ~1e-5.
inline constexpr double kRowSumTolerance = 1e-4;
inline constexpr double kEntryUpperSlack = 1e-6;
inline constexpr double kSimplexTolerance = 1e-6;

/// Hallucination type of a labelled sample.
enum class Category { kFullyDetached, kStronglyDetached, kOscillatory, kOther };

std::string_view category_name(Category c);
std::optional<Category> parse_category(std::string_view name);

/// Dense row-major m x n matrix of cross-attention weights. Row t holds the
/// attention over source positions at decoding step t.
class AttentionMatrix {
 public:
  AttentionMatrix() = default;
  AttentionMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<const double> row(std::size_t t) const {
    return {values_.data() + t * cols_, cols_};
  }
  double at(std::size_t t, std::size_t j) const { return values_[t * cols_ + j]; }
  std::span<const double> values() const { return values_; }

  bool operator==(const AttentionMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

/// One translation instance as exported by a producer.
struct AttentionRecord {
  std::string id;
  std::size_t src_len = 0;
  std::size_t tgt_len = 0;
  AttentionMatrix attention;
  std::optional<std::vector<double>> token_logprobs;  // natural log
  std::optional<std::vector<std::string>> src_tokens;
  std::optional<std::vector<std::string>> tgt_tokens;
  std::optional<double> quality;
  std::optional<int> label;
  std::optional<Category> category;
};

/// A point on the probability simplex over source token positions.
class SourceMassDistribution {
 public:
  /// Renormalizes `mass` to sum to one. Throws NotADistribution if an entry
  /// is negative or non-finite, or if the raw sum is further than
  /// `tolerance` from one.
  static SourceMassDistribution normalized(std::vector<double> mass,
                                           double tolerance = kRowSumTolerance);

  /// Accepts `mass` bit-for-bit after checking the simplex invariants.
  static SourceMassDistribution validated(std::vector<double> mass);

  static SourceMassDistribution uniform(std::size_t n);
  static SourceMassDistribution one_hot(std::size_t n, std::size_t index);

  std::size_t size() const { return mass_.size(); }
  std::span<const double> mass() const { return mass_; }
  double operator[](std::size_t i) const { return mass_[i]; }

  bool operator==(const SourceMassDistribution&) const = default;

 private:
  explicit SourceMassDistribution(std::vector<double> mass) : mass_(std::move(mass)) {}

  std::vector<double> mass_;
};

enum class ViolationKind {
  kNonPositiveLength,
  kDimensionMismatch,
  kNonFiniteEntry,
  kEntryOutOfRange,
  kRowSumViolation,
  kLogprobLengthMismatch,
  kLogprobPositive,
  kLabelOutOfRange,
};

std::string_view violation_kind_name(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string field;
  std::string detail;
  std::optional<std::size_t> row;

  std::string to_string() const;
};

/// Reports every invariant the record breaks; never throws.
std::vector<Violation> validate_record(const AttentionRecord& record);

/// pi_j = (1/m) * sum_t attention(t, j), renormalized onto the simplex.
/// Throws DimensionMismatch or NotADistribution for invalid records.
SourceMassDistribution compute_source_mass(const AttentionRecord& record);

/// Unnormalized column sums of the attention matrix (total incoming mass per
/// source token over all decoding steps).
std::vector<double> column_sums(const AttentionMatrix& attention);

}  // namespace wassdet
