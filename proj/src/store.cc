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

#include "wassdet/store.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include <zlib.h>

#include "json.hpp"
#include "wassdet/errors.h"

namespace wassdet {

std::string_view quality_mode_name(QualityFilterMode mode) {
  switch (mode) {
    case QualityFilterMode::kTopNByQuality: return "top-n";
    case QualityFilterMode::kAll: return "all";
    case QualityFilterMode::kForcedDecodeReferences: return "forced-references";
  }
  return "all";
}

std::optional<QualityFilterMode> parse_quality_mode(std::string_view name) {
  for (auto m : {QualityFilterMode::kTopNByQuality, QualityFilterMode::kAll,
                 QualityFilterMode::kForcedDecodeReferences}) {
    if (quality_mode_name(m) == name) return m;
  }
  return std::nullopt;
}

namespace {

bool by_length_then_id(const ReferenceEntry& a, const ReferenceEntry& b) {
  if (a.tgt_len != b.tgt_len) return a.tgt_len < b.tgt_len;
  return a.id < b.id;
}

}  // namespace

ReferenceStore::ReferenceStore(std::vector<ReferenceEntry> entries, BuildMeta meta)
    : entries_(std::move(entries)), meta_(std::move(meta)) {
  if (entries_.empty()) {
    throw Error(ErrorCode::kEmptyStream, "reference store must not be empty");
  }
  for (const auto& e : entries_) {
    if (e.tgt_len == 0) {
      throw Error(ErrorCode::kInvalidArgument, "reference entry " + e.id + " has tgt_len 0");
    }
  }
  std::stable_sort(entries_.begin(), entries_.end(), by_length_then_id);
}

StoreBuilder::StoreBuilder(QualityFilterMode mode, std::size_t top_n,
                           std::string dataset_tag, std::string creation_time)
    : mode_(mode),
      top_n_(top_n),
      dataset_tag_(std::move(dataset_tag)),
      creation_time_(std::move(creation_time)) {}

void StoreBuilder::add(const AttentionRecord& record) {
  if (mode_ == QualityFilterMode::kTopNByQuality && !record.quality) {
    throw Error(ErrorCode::kMissingQuality,
                "record " + record.id + " has no quality score for top-n filtering");
  }
  entries_.push_back(
      {record.id, compute_source_mass(record), record.tgt_len, record.quality});
}

ReferenceStore StoreBuilder::finish() && {
  if (entries_.empty()) {
    throw Error(ErrorCode::kEmptyStream, "no records to build a store from");
  }
  BuildMeta meta{mode_, top_n_, std::move(dataset_tag_), std::move(creation_time_),
                 entries_.size()};
  if (mode_ == QualityFilterMode::kTopNByQuality && top_n_ < entries_.size()) {
    if (top_n_ == 0) throw Error(ErrorCode::kInvalidArgument, "top_n must be >= 1");
    auto better = [](const ReferenceEntry& a, const ReferenceEntry& b) {
      if (*a.quality != *b.quality) return *a.quality > *b.quality;
      return a.id < b.id;
    };
    std::partial_sort(entries_.begin(), entries_.begin() + static_cast<long>(top_n_),
                      entries_.end(), better);
    entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(top_n_), entries_.end());
  }
  return ReferenceStore(std::move(entries_), std::move(meta));
}

ReferenceStore build_store(std::span<const AttentionRecord> records,
                           QualityFilterMode mode, std::size_t top_n) {
  StoreBuilder builder(mode, top_n);
  for (const auto& r : records) builder.add(r);
  return std::move(builder).finish();
}

std::pair<std::size_t, std::size_t> length_window(std::size_t m, double delta) {
  // The slack absorbs products such as 0.9 * 30 = 27.000000000000004.
  constexpr double kSlack = 1e-9;
  const double md = static_cast<double>(m);
  const double lo = std::ceil((1.0 - delta) * md - kSlack);
  const double hi = std::floor((1.0 + delta) * md + kSlack);
  return {static_cast<std::size_t>(std::max(lo, 0.0)), static_cast<std::size_t>(hi)};
}

std::span<const ReferenceEntry> length_filter(const ReferenceStore& store, std::size_t m,
                                              double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "delta must lie in (0, 1)");
  }
  const auto [lo, hi] = length_window(m, delta);
  auto entries = store.entries();
  auto first = std::lower_bound(entries.begin(), entries.end(), lo,
                                [](const ReferenceEntry& e, std::size_t len) {
                                  return e.tgt_len < len;
                                });
  auto last = std::upper_bound(first, entries.end(), hi,
                               [](std::size_t len, const ReferenceEntry& e) {
                                 return len < e.tgt_len;
                               });
  return {first, last};
}

namespace {

// Unbiased draw from [0, bound) that does not depend on the standard
// library's distribution implementations.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

std::vector<const ReferenceEntry*> sample_reference_set(
    std::span<const ReferenceEntry> candidates, std::size_t r_max, std::uint64_t seed) {
  if (r_max == 0) throw Error(ErrorCode::kInvalidArgument, "r_max must be >= 1");
  std::vector<const ReferenceEntry*> out;
  if (candidates.size() <= r_max) {
    out.reserve(candidates.size());
    for (const auto& c : candidates) out.push_back(&c);
    return out;
  }
  std::vector<std::size_t> idx(candidates.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < r_max; ++i) {
    const std::size_t j = i + uniform_below(rng, idx.size() - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(r_max);
  std::sort(idx.begin(), idx.end());
  out.reserve(r_max);
  for (std::size_t i : idx) out.push_back(&candidates[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Binary format

namespace {

constexpr char kMagic[8] = {'W', 'D', 'S', 'T', 'O', 'R', 'E', '\0'};
constexpr std::uint32_t kFormatVersion = 1;

class ByteWriter {
 public:
  void raw(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    bytes_.insert(bytes_.end(), p, p + n);
  }
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    raw(s.data(), s.size());
  }
  std::vector<std::uint8_t>& bytes() { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::span<const std::uint8_t> take(std::size_t n) {
    if (n > bytes_.size() - pos_) {
      throw Error(ErrorCode::kCorruptStore, "store file is truncated");
    }
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint8_t u8() { return take(1)[0]; }
  std::uint32_t u32() {
    auto s = take(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(s[i]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    auto s = take(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(s[i]) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    auto s = take(u32());
    return std::string(s.begin(), s.end());
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t checksum(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  return static_cast<std::uint32_t>(
      crc32(crc, bytes.data(), static_cast<uInt>(bytes.size())));
}

}  // namespace

std::vector<std::uint8_t> serialize_store(const ReferenceStore& store) {
  ByteWriter w;
  w.raw(kMagic, sizeof kMagic);
  w.u32(kFormatVersion);
  const BuildMeta& m = store.meta();
  nlohmann::json meta = {
      {"quality_filter_mode", quality_mode_name(m.quality_filter_mode)},
      {"top_n", m.top_n},
      {"source_dataset_tag", m.source_dataset_tag},
      {"creation_time", m.creation_time},
      {"input_records", m.input_records},
  };
  w.str(meta.dump());
  w.u64(store.size());
  for (const ReferenceEntry& e : store.entries()) {
    w.str(e.id);
    w.u32(static_cast<std::uint32_t>(e.tgt_len));
    w.u8(e.quality ? 1 : 0);
    w.f64(e.quality.value_or(0.0));
    w.u32(static_cast<std::uint32_t>(e.pi.size()));
    for (double v : e.pi.mass()) w.f64(v);
  }
  const std::uint32_t crc = checksum(w.bytes());
  w.u32(crc);
  return std::move(w.bytes());
}

ReferenceStore deserialize_store(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < sizeof kMagic + 4 + 4) {
    throw Error(ErrorCode::kCorruptStore, "store file is truncated");
  }
  if (!std::equal(kMagic, kMagic + sizeof kMagic, bytes.begin())) {
    throw Error(ErrorCode::kCorruptStore, "bad magic");
  }
  const auto body = bytes.first(bytes.size() - 4);
  ByteReader tail(bytes.last(4));
  if (tail.u32() != checksum(body)) {
    throw Error(ErrorCode::kCorruptStore, "checksum mismatch");
  }

  ByteReader r(body);
  r.take(sizeof kMagic);
  const std::uint32_t version = r.u32();
  if (version != kFormatVersion) {
    throw Error(ErrorCode::kCorruptStore,
                "unsupported store version " + std::to_string(version));
  }
  BuildMeta meta;
  try {
    auto j = nlohmann::json::parse(r.str());
    auto mode = parse_quality_mode(j.at("quality_filter_mode").get<std::string>());
    if (!mode) throw Error(ErrorCode::kCorruptStore, "unknown quality_filter_mode");
    meta.quality_filter_mode = *mode;
    meta.top_n = j.at("top_n").get<std::size_t>();
    meta.source_dataset_tag = j.at("source_dataset_tag").get<std::string>();
    meta.creation_time = j.at("creation_time").get<std::string>();
    meta.input_records = j.at("input_records").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kCorruptStore, std::string("build_meta: ") + e.what());
  }

  const std::uint64_t count = r.u64();
  if (count == 0) throw Error(ErrorCode::kCorruptStore, "store has no entries");
  std::vector<ReferenceEntry> entries;
  entries.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count, 1u << 20)));
  for (std::uint64_t i = 0; i < count; ++i) {
    ReferenceEntry e{r.str(), SourceMassDistribution::uniform(1), 0, std::nullopt};
    e.tgt_len = r.u32();
    const bool has_quality = r.u8() != 0;
    const double quality = r.f64();
    if (has_quality) e.quality = quality;
    const std::uint32_t n = r.u32();
    std::vector<double> mass(n);
    for (auto& v : mass) v = r.f64();
    try {
      e.pi = SourceMassDistribution::validated(std::move(mass));
    } catch (const Error& err) {
      throw Error(ErrorCode::kCorruptStore, "entry " + e.id + ": " + err.what());
    }
    if (e.tgt_len == 0) throw Error(ErrorCode::kCorruptStore, "entry " + e.id + ": tgt_len 0");
    if (!entries.empty() && by_length_then_id(e, entries.back())) {
      throw Error(ErrorCode::kCorruptStore, "entries are not sorted by tgt_len");
    }
    entries.push_back(std::move(e));
  }
  if (!r.done()) throw Error(ErrorCode::kCorruptStore, "trailing bytes after entries");
  return ReferenceStore(std::move(entries), std::move(meta));
}

void save_store(const ReferenceStore& store, const std::filesystem::path& path) {
  const auto bytes = serialize_store(store);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoError, "short write to " + path.string());
}

ReferenceStore load_store(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIoError, "read error on " + path.string());
  return deserialize_store(bytes);
}

}  // namespace wassdet
