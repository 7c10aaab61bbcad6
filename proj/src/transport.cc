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

#include "wassdet/transport.h"

#include <algorithm>
#include <cmath>

#include "wassdet/errors.h"

namespace wassdet {

std::string_view alignment_name(SupportAlignment a) {
  switch (a) {
    case SupportAlignment::kPadToCommonLength: return "pad";
    case SupportAlignment::kNormalizedPosition: return "normalized";
  }
  return "pad";
}

std::optional<SupportAlignment> parse_alignment(std::string_view name) {
  if (name == "pad") return SupportAlignment::kPadToCommonLength;
  if (name == "normalized") return SupportAlignment::kNormalizedPosition;
  return std::nullopt;
}

double support_position(std::size_t i, std::size_t n, SupportAlignment a) {
  if (a == SupportAlignment::kPadToCommonLength) return static_cast<double>(i);
  return static_cast<double>(i + 1) / static_cast<double>(n);
}

std::vector<double> TransportPlan::row_marginal(std::size_t n) const {
  std::vector<double> out(n, 0.0);
  for (const Entry& e : entries) out.at(e.from) += e.mass;
  return out;
}

std::vector<double> TransportPlan::column_marginal(std::size_t n) const {
  std::vector<double> out(n, 0.0);
  for (const Entry& e : entries) out.at(e.to) += e.mass;
  return out;
}

namespace {

// Mass of p sitting above q, which is half the L1 gap when both sum to one.
// Missing coordinates count as zero.
double surplus_mass(std::span<const double> p, std::span<const double> q) {
  double total = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double gap = p[j] - (j < q.size() ? q[j] : 0.0);
    if (gap > 0.0) total += gap;
  }
  return total;
}

}  // namespace

double tv_distance(const SourceMassDistribution& p, const SourceMassDistribution& q) {
  if (p.size() != q.size()) {
    throw Error(ErrorCode::kSupportMismatch, "tv_distance needs equal support sizes");
  }
  return surplus_mass(p.mass(), q.mass());
}

double padded_tv_distance(const SourceMassDistribution& p,
                          const SourceMassDistribution& q) {
  return surplus_mass(p.mass(), q.mass());
}

namespace {

// Unit spacing: sum over the first L-1 gaps of |F_p(i) - F_q(i)|.
double padded_cdf_distance(std::span<const double> p, std::span<const double> q) {
  const std::size_t len = std::max(p.size(), q.size());
  double cdf_p = 0.0;
  double cdf_q = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < len; ++i) {
    if (i < p.size()) cdf_p += p[i];
    if (i < q.size()) cdf_q += q[i];
    total += std::abs(cdf_p - cdf_q);
  }
  return total;
}

// Both CDFs are right-continuous step functions with jumps at (i+1)/n. Walk
// the merged breakpoints left to right and integrate |F_p - F_q| over each
// interval between consecutive breakpoints.
double normalized_cdf_distance(std::span<const double> p, std::span<const double> q) {
  const double np = static_cast<double>(p.size());
  const double nq = static_cast<double>(q.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double cdf_p = 0.0;
  double cdf_q = 0.0;
  double x = 0.0;
  double total = 0.0;
  while (i < p.size() || j < q.size()) {
    const double xp = i < p.size() ? static_cast<double>(i + 1) / np : 2.0;
    const double xq = j < q.size() ? static_cast<double>(j + 1) / nq : 2.0;
    const double next = std::min(xp, xq);
    total += std::abs(cdf_p - cdf_q) * (next - x);
    x = next;
    if (xp == next) cdf_p += p[i++];
    if (xq == next) cdf_q += q[j++];
  }
  return total;
}

}  // namespace

double wasserstein1(const SourceMassDistribution& p, const SourceMassDistribution& q,
                    SupportAlignment alignment) {
  if (alignment == SupportAlignment::kPadToCommonLength) {
    return padded_cdf_distance(p.mass(), q.mass());
  }
  return normalized_cdf_distance(p.mass(), q.mass());
}

TransportPlan monotone_coupling_oracle(const SourceMassDistribution& p,
                                       const SourceMassDistribution& q,
                                       SupportAlignment alignment) {
  TransportPlan plan;
  std::size_t i = 0;
  std::size_t j = 0;
  double left_p = p.size() > 0 ? p[0] : 0.0;
  double left_q = q.size() > 0 ? q[0] : 0.0;
  while (i < p.size() && j < q.size()) {
    const double moved = std::min(left_p, left_q);
    if (moved > 0.0) {
      const double dist = std::abs(support_position(i, p.size(), alignment) -
                                   support_position(j, q.size(), alignment));
      plan.entries.push_back({i, j, moved});
      plan.total_cost += moved * dist;
    }
    left_p -= moved;
    left_q -= moved;
    // The side that supplied `moved` is now exactly zero; ties advance both.
    if (left_p == 0.0 && ++i < p.size()) left_p = p[i];
    if (left_q == 0.0 && ++j < q.size()) left_q = q[j];
  }
  return plan;
}

TransportPlan zero_one_cost_oracle(const SourceMassDistribution& p,
                                   const SourceMassDistribution& q) {
  if (p.size() != q.size()) {
    throw Error(ErrorCode::kSupportMismatch, "0/1-cost plan needs equal support sizes");
  }
  const std::size_t n = p.size();
  TransportPlan plan;
  std::vector<double> surplus(n);
  std::vector<double> deficit(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double stay = std::min(p[k], q[k]);
    if (stay > 0.0) plan.entries.push_back({k, k, stay});
    surplus[k] = p[k] - stay;
    deficit[k] = q[k] - stay;
  }
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < n && j < n) {
    if (surplus[i] <= 0.0) {
      ++i;
      continue;
    }
    if (deficit[j] <= 0.0) {
      ++j;
      continue;
    }
    const double moved = std::min(surplus[i], deficit[j]);
    plan.entries.push_back({i, j, moved});
    plan.total_cost += moved;  // i != j: a position cannot be both surplus and deficit
    surplus[i] -= moved;
    deficit[j] -= moved;
  }
  return plan;
}

}  // namespace wassdet
