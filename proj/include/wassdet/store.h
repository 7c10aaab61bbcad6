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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wassdet/attention.h"

namespace wassdet {

/// A source mass distribution from a held-out translation, keyed by the
/// translation length it was produced for.
struct ReferenceEntry {
  std::string id;
  SourceMassDistribution pi;
  std::size_t tgt_len = 0;
  std::optional<double> quality;

  bool operator==(const ReferenceEntry&) const = default;
};

enum class QualityFilterMode {
  kTopNByQuality,
  kAll,
  // Producer force-decoded the reference translations. Stored like kAll; the
  // mode only labels where the distributions came from.
  kForcedDecodeReferences,
};

std::string_view quality_mode_name(QualityFilterMode mode);
std::optional<QualityFilterMode> parse_quality_mode(std::string_view name);

struct BuildMeta {
  QualityFilterMode quality_filter_mode = QualityFilterMode::kAll;
  std::size_t top_n = 0;
  std::string source_dataset_tag;
  std::string creation_time;
  std::size_t input_records = 0;

  bool operator==(const BuildMeta&) const = default;
};

/// Immutable held-out reference set, sorted by (tgt_len, id).
class ReferenceStore {
 public:
  ReferenceStore(std::vector<ReferenceEntry> entries, BuildMeta meta);

  std::span<const ReferenceEntry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const BuildMeta& meta() const { return meta_; }

  bool operator==(const ReferenceStore&) const = default;

 private:
  std::vector<ReferenceEntry> entries_;
  BuildMeta meta_;
};

/// Streaming construction: each record is reduced to its source mass
/// distribution as it arrives, so attention matrices are never retained.
class StoreBuilder {
 public:
  StoreBuilder(QualityFilterMode mode, std::size_t top_n, std::string dataset_tag = "",
               std::string creation_time = "");

  /// Throws MissingQuality under kTopNByQuality when the record has none, and
  /// the compute_source_mass errors for invalid attention.
  void add(const AttentionRecord& record);

  std::size_t pending() const { return entries_.size(); }

  /// Throws EmptyStream if nothing was added.
  ReferenceStore finish() &&;

 private:
  QualityFilterMode mode_;
  std::size_t top_n_;
  std::string dataset_tag_;
  std::string creation_time_;
  std::vector<ReferenceEntry> entries_;
};

ReferenceStore build_store(std::span<const AttentionRecord> records,
                           QualityFilterMode mode, std::size_t top_n);

/// Entries whose tgt_len lies in [ceil((1-delta) m), floor((1+delta) m)].
/// The view aliases `store`.
std::span<const ReferenceEntry> length_filter(const ReferenceStore& store, std::size_t m,
                                              double delta);

/// Inclusive integer window used by length_filter.
std::pair<std::size_t, std::size_t> length_window(std::size_t m, double delta);

/// Uniform sample of `r_max` candidates without replacement, in candidate
/// order. Returns every candidate when there are at most `r_max`. Pointers
/// alias `candidates`.
std::vector<const ReferenceEntry*> sample_reference_set(
    std::span<const ReferenceEntry> candidates, std::size_t r_max, std::uint64_t seed);

/// Binary store file; layout documented in docs/store_format.md.
void save_store(const ReferenceStore& store, const std::filesystem::path& path);
ReferenceStore load_store(const std::filesystem::path& path);

std::vector<std::uint8_t> serialize_store(const ReferenceStore& store);
ReferenceStore deserialize_store(std::span<const std::uint8_t> bytes);

}  // namespace wassdet
