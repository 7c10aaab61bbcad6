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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "test_util.h"
#include "wassdet/errors.h"

namespace wassdet {
namespace {

using testing::make_record;

TEST(SourceMass, PermutationMatrixAveragesToUniform) {
  auto pi = compute_source_mass(make_record("a", 2, 2, {1, 0, 0, 1}));
  EXPECT_EQ(pi, SourceMassDistribution::uniform(2));
}

TEST(SourceMass, AllMassOnLastToken) {
  auto pi = compute_source_mass(make_record("a", 2, 3, {0, 0, 1, 0, 0, 1}));
  EXPECT_DOUBLE_EQ(pi[0], 0.0);
  EXPECT_DOUBLE_EQ(pi[1], 0.0);
  EXPECT_DOUBLE_EQ(pi[2], 1.0);
}

TEST(SourceMass, ColumnMeans) {
  auto pi = compute_source_mass(make_record("a", 3, 2, {0.6, 0.4, 0.2, 0.8, 0.5, 0.5}));
  // (0.6 + 0.2 + 0.5) / 3 and (0.4 + 0.8 + 0.5) / 3
  EXPECT_NEAR(pi[0], 1.3 / 3.0, 1e-12);
  EXPECT_NEAR(pi[1], 1.7 / 3.0, 1e-12);
  EXPECT_NEAR(pi[0], 0.43333, 1e-5);
  EXPECT_NEAR(pi[1], 0.56667, 1e-5);
}

TEST(SourceMass, RowsWithinToleranceAreRenormalized) {
  auto pi = compute_source_mass(make_record("a", 2, 2, {0.50004, 0.5, 0.5, 0.5}));
  EXPECT_NEAR(pi[0] + pi[1], 1.0, 1e-15);
  EXPECT_GT(pi[0], pi[1]);
}

TEST(SourceMass, ShapeMismatchThrows) {
  AttentionRecord r = make_record("a", 2, 2, {1, 0, 0, 1});
  r.src_len = 3;
  try {
    compute_source_mass(r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(SourceMass, RowSumViolationThrows) {
  try {
    compute_source_mass(make_record("a", 2, 2, {0.4, 0.4, 0.5, 0.5}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotADistribution);
  }
}

TEST(AttentionMatrix, WrongValueCountThrows) {
  EXPECT_THROW(AttentionMatrix(2, 2, {1, 0, 0}), Error);
}

TEST(ValidateRecord, ValidRecordHasNoViolations) {
  AttentionRecord r = make_record("a", 2, 2, {1, 0, 0, 1});
  r.token_logprobs = std::vector<double>{-0.1, -0.2};
  r.label = 1;
  EXPECT_TRUE(validate_record(r).empty());
}

TEST(ValidateRecord, RowSumViolationNamesRow) {
  auto v = validate_record(make_record("a", 2, 2, {0.4, 0.4, 0.5, 0.5}));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::kRowSumViolation);
  EXPECT_EQ(v[0].row, 0u);
}

TEST(ValidateRecord, LogprobLengthMismatch) {
  AttentionRecord r = make_record("a", 2, 2, {1, 0, 0, 1});
  r.token_logprobs = std::vector<double>{-0.1};
  auto v = validate_record(r);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::kLogprobLengthMismatch);
}

TEST(ValidateRecord, CollectsSeveralViolations) {
  AttentionRecord r = make_record("a", 2, 2, {1.5, -0.5, std::nan(""), 1});
  r.token_logprobs = std::vector<double>{0.3, -0.1};
  r.label = 2;
  auto v = validate_record(r);
  auto has = [&](ViolationKind k) {
    return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.kind == k; });
  };
  EXPECT_TRUE(has(ViolationKind::kEntryOutOfRange));
  EXPECT_TRUE(has(ViolationKind::kNonFiniteEntry));
  EXPECT_TRUE(has(ViolationKind::kLogprobPositive));
  EXPECT_TRUE(has(ViolationKind::kLabelOutOfRange));
}

TEST(ValidateRecord, ZeroLengths) {
  AttentionRecord r;
  r.id = "empty";
  auto v = validate_record(r);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v[0].kind, ViolationKind::kNonPositiveLength);
}

TEST(Distribution, ValidatedRejectsNegativeAndOffSimplex) {
  EXPECT_THROW(SourceMassDistribution::validated({0.5, 0.6}), Error);
  EXPECT_THROW(SourceMassDistribution::validated({1.2, -0.2}), Error);
  EXPECT_NO_THROW(SourceMassDistribution::validated({0.25, 0.75}));
}

TEST(Distribution, NormalizedRejectsFarFromOne) {
  EXPECT_THROW(SourceMassDistribution::normalized({0.5, 0.4}), Error);
  EXPECT_THROW(SourceMassDistribution::normalized({}), Error);
}

TEST(Distribution, OneHotAndUniform) {
  auto u = SourceMassDistribution::uniform(4);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(u[i], 0.25);
  auto h = SourceMassDistribution::one_hot(3, 2);
  EXPECT_EQ(h[2], 1.0);
  EXPECT_EQ(h[0], 0.0);
  EXPECT_THROW(SourceMassDistribution::one_hot(3, 3), Error);
}

TEST(Category, NamesRoundTrip) {
  for (Category c : {Category::kFullyDetached, Category::kStronglyDetached,
                     Category::kOscillatory, Category::kOther}) {
    EXPECT_EQ(parse_category(category_name(c)), c);
  }
  EXPECT_FALSE(parse_category("nope").has_value());
}

}  // namespace
}  // namespace wassdet
