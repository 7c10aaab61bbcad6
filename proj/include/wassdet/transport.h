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
#include <string_view>
#include <vector>

#include "wassdet/attention.h"

namespace wassdet {

/// How two distributions with different support sizes are placed on a
/// common line before computing W1.
///
///   kPadToCommonLength: index i sits at integer position i; the shorter
///     distribution is zero-padded on the right.
///   kNormalizedPosition: index i (0-based) of a length-n distribution sits at
///     (i + 1) / n, so every support ends at 1.
enum class SupportAlignment { kPadToCommonLength, kNormalizedPosition };

std::string_view alignment_name(SupportAlignment a);
std::optional<SupportAlignment> parse_alignment(std::string_view name);

/// Position of index `i` of a length-`n` distribution on the real line.
double support_position(std::size_t i, std::size_t n, SupportAlignment a);

struct TransportPlan {
  struct Entry {
    std::size_t from;  // index into the first distribution
    std::size_t to;    // index into the second distribution
    double mass;
  };
  std::vector<Entry> entries;
  double total_cost = 0.0;

  /// Mass leaving each index of the first distribution.
  std::vector<double> row_marginal(std::size_t n) const;
  /// Mass arriving at each index of the second distribution.
  std::vector<double> column_marginal(std::size_t n) const;
};

/// 0.5 * ||p - q||_1, evaluated as the surplus sum_j max(p_j - q_j, 0). Equal
/// to the optimal transport cost under the 0/1 ground cost. Throws
/// SupportMismatch if the sizes differ.
double tv_distance(const SourceMassDistribution& p, const SourceMassDistribution& q);

/// tv_distance after zero-padding the shorter support on the right.
double padded_tv_distance(const SourceMassDistribution& p,
                          const SourceMassDistribution& q);

/// Exact W1 under |u - v| ground cost, computed as the L1 norm of the
/// difference of the two CDFs over the merged breakpoint grid.
double wasserstein1(const SourceMassDistribution& p, const SourceMassDistribution& q,
                    SupportAlignment alignment);

/// Independent route to W1: greedy north-west-corner coupling of the two
/// distributions in positional order, which is optimal on the line.
TransportPlan monotone_coupling_oracle(const SourceMassDistribution& p,
                                       const SourceMassDistribution& q,
                                       SupportAlignment alignment);

/// Independent route to the 0/1-cost optimum: min(p_j, q_j) stays in place,
/// the surplus is shipped to the deficits in index order.
TransportPlan zero_one_cost_oracle(const SourceMassDistribution& p,
                                   const SourceMassDistribution& q);

}  // namespace wassdet
