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

#include "wassdet/cli.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "wassdet/calibration.h"
#include "wassdet/errors.h"
#include "wassdet/eval.h"
#include "wassdet/synth.h"

namespace wassdet {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError:
    case ErrorCode::kInvalidConfig:
    case ErrorCode::kInvalidArgument:
      return kExitParse;
    case ErrorCode::kIoError:
      return kExitIo;
    default:
      return kExitInvariant;
  }
}

void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& fn) {
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// ---------------------------------------------------------------------------
// Scoring

namespace {

bool needs_source_mass(DetectorKind k) {
  return k == DetectorKind::kWtu || k == DetectorKind::kWtd || k == DetectorKind::kCombo ||
         k == DetectorKind::kConvex || k == DetectorKind::kAis;
}

void note_shrunk_k(const WassToDataResult& r, const DetectorConfig& cfg, ScoreLine& line) {
  if (!r.k_shrunk) return;
  const std::string w = "k shrunk from " + std::to_string(cfg.k) + " to " +
                        std::to_string(r.k_used) + " (" + std::to_string(r.references) +
                        " references)";
  if (std::find(line.warnings.begin(), line.warnings.end(), w) == line.warnings.end()) {
    line.warnings.push_back(w);
  }
}

}  // namespace

ScoreLine score_record(const AttentionRecord& record, const ScoringOptions& opts) {
  ScoreLine line;
  line.id = record.id;
  line.seed = opts.cfg.seed;

  std::optional<SourceMassDistribution> pi;
  std::string pi_error;
  if (std::any_of(opts.detectors.begin(), opts.detectors.end(), needs_source_mass)) {
    try {
      pi = compute_source_mass(record);
    } catch (const Error& e) {
      pi_error = e.what();
    }
  }

  for (DetectorKind kind : opts.detectors) {
    const std::string key(detector_info(kind).key);
    try {
      if (needs_source_mass(kind) && !pi) throw Error(ErrorCode::kNotADistribution, pi_error);
      switch (kind) {
        case DetectorKind::kWtu:
          line.scores[key] = wass_to_unif(*pi);
          break;
        case DetectorKind::kWtd: {
          const auto r = wass_to_data(*pi, record.tgt_len, *opts.store, opts.cfg);
          note_shrunk_k(r, opts.cfg, line);
          line.scores[key] = r.score;
          break;
        }
        case DetectorKind::kCombo: {
          const auto r =
              wass_combo(*pi, record.tgt_len, *opts.store, opts.cfg, *opts.calibration);
          if (r.wtd) note_shrunk_k(*r.wtd, opts.cfg, line);
          line.scores[key] = r.score;
          if (opts.calibration->decision_threshold) {
            line.flags[key] = r.score > *opts.calibration->decision_threshold ? 1 : 0;
          }
          break;
        }
        case DetectorKind::kConvex:
          line.scores[key] = convex_combo(*pi, record.tgt_len, *opts.store, opts.cfg,
                                          *opts.calibration, opts.convex_lambda);
          break;
        case DetectorKind::kAis:
          line.scores[key] = attn_ign_src(record, opts.cfg.ais_lambda);
          break;
        case DetectorKind::kSlp:
          line.scores[key] = seq_logprob(record);
          break;
        case DetectorKind::kNgram: {
          if (!record.src_tokens || !record.tgt_tokens) {
            throw Error(ErrorCode::kMissingTokens, "record " + record.id + " has no tokens");
          }
          const bool hit = top_ngram_heuristic(*record.src_tokens, *record.tgt_tokens,
                                               opts.ngram_n, opts.ngram_margin);
          line.scores[key] = hit ? 1.0 : 0.0;
          line.flags[key] = hit ? 1 : 0;
          break;
        }
      }
    } catch (const Error& e) {
      line.errors[key] = e.what();
    }
  }
  return line;
}

std::vector<ScoreLine> score_records(std::span<const AttentionRecord> records,
                                     const ScoringOptions& opts) {
  std::vector<ScoreLine> out(records.size());
  parallel_for(records.size(), opts.threads,
               [&](std::size_t i) { out[i] = score_record(records[i], opts); });
  return out;
}

// ---------------------------------------------------------------------------
// Subcommands

namespace {

struct ConfigFlags {
  DetectorConfig cfg;
  std::string alignment = "pad";
  std::string wtd_cost = "l1";
  std::string selection = "length-filter";

  void attach(CLI::App* app, bool with_seed = true) {
    app->add_option("--delta", cfg.delta, "Length-filter half-width, in (0,1)")
        ->capture_default_str();
    app->add_option("--r-max", cfg.r_max, "Maximum reference-set size")->capture_default_str();
    app->add_option("--k", cfg.k, "Bottom-k distances averaged by Wass-to-Data")
        ->capture_default_str();
    app->add_option("--percentile-k", cfg.percentile_k,
                    "Percentile of held-out Wass-to-Unif scores used as tau, in (98,100)")
        ->capture_default_str();
    app->add_option("--ais-lambda", cfg.ais_lambda, "Attn-ign-SRC threshold")
        ->capture_default_str();
    app->add_option("--alignment", alignment, "Support alignment: pad | normalized")
        ->capture_default_str();
    if (with_seed) {
      app->add_option("--seed", cfg.seed, "Reference sampling seed")->capture_default_str();
    }
    app->add_option("--wtd-cost", wtd_cost, "Wass-to-Data ground cost: l1 | zero-one")
        ->capture_default_str();
    app->add_option("--reference-selection", selection,
                    "Reference set construction: length-filter | random")
        ->capture_default_str();
  }

  DetectorConfig resolve() {
    auto a = parse_alignment(alignment);
    if (!a) throw Error(ErrorCode::kInvalidConfig, "unknown alignment " + alignment);
    auto c = parse_wtd_cost(wtd_cost);
    if (!c) throw Error(ErrorCode::kInvalidConfig, "unknown wtd cost " + wtd_cost);
    auto s = parse_selection(selection);
    if (!s) throw Error(ErrorCode::kInvalidConfig, "unknown reference selection " + selection);
    cfg.alignment = *a;
    cfg.wtd_cost = *c;
    cfg.selection = *s;
    cfg.validate();
    return cfg;
  }
};

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  return in;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// --- build-store -----------------------------------------------------------

struct BuildStoreArgs {
  std::string input;
  std::string out;
  std::string quality_mode = "top-n";
  std::size_t top_n = 250000;
  std::string tag;
  std::string creation_time;
};

int cmd_build_store(const BuildStoreArgs& a, std::ostream& out, std::ostream& err) {
  auto mode = parse_quality_mode(a.quality_mode);
  if (!mode) throw Error(ErrorCode::kInvalidConfig, "unknown quality mode " + a.quality_mode);
  auto in = open_input(a.input);
  RecordReader reader(in);
  StoreBuilder builder(*mode, a.top_n, a.tag.empty() ? a.input : a.tag,
                       a.creation_time.empty() ? utc_now() : a.creation_time);
  AttentionRecord record;
  while (reader.next(record)) {
    try {
      builder.add(record);
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(reader.line_number()) + ": " + e.what());
    }
  }
  const std::size_t seen = builder.pending();
  ReferenceStore store = std::move(builder).finish();
  if (*mode == QualityFilterMode::kTopNByQuality && a.top_n > seen) {
    err << "warning: top-n " << a.top_n << " exceeds the " << seen
        << " input records; keeping all of them\n";
  }
  save_store(store, a.out);
  const BuildMeta& m = store.meta();
  nlohmann::ordered_json meta = {
      {"quality_filter_mode", quality_mode_name(m.quality_filter_mode)},
      {"top_n", m.top_n},
      {"source_dataset_tag", m.source_dataset_tag},
      {"creation_time", m.creation_time},
      {"input_records", m.input_records},
  };
  out << "entries: " << store.size() << "\n";
  out << "build_meta: " << meta.dump() << "\n";
  return kExitOk;
}

// --- calibrate -------------------------------------------------------------

struct CalibrateArgs {
  std::string store;
  std::string input;
  std::string out;
  std::optional<double> decision_threshold;
  std::optional<double> decision_percentile;
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
};

int cmd_calibrate(const CalibrateArgs& a, ConfigFlags& flags, std::ostream& out,
                  std::ostream& err) {
  const DetectorConfig cfg = flags.resolve();
  if (a.decision_percentile && !(*a.decision_percentile >= 0 && *a.decision_percentile <= 100)) {
    throw Error(ErrorCode::kInvalidConfig, "decision percentile must lie in [0, 100]");
  }
  const ReferenceStore store = load_store(a.store);
  const auto held = read_records(a.input);

  std::vector<double> wtu(held.size());
  std::vector<std::optional<double>> wtd(held.size());
  parallel_for(held.size(), a.threads, [&](std::size_t i) {
    const auto pi = compute_source_mass(held[i]);
    wtu[i] = wass_to_unif(pi);
    try {
      wtd[i] = wass_to_data(pi, held[i].tgt_len, store, cfg).score;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEmptyReferenceSet) throw;
    }
  });

  std::vector<double> wtd_values;
  for (const auto& v : wtd) {
    if (v) wtd_values.push_back(*v);
  }
  if (wtd_values.size() < held.size()) {
    err << "warning: " << held.size() - wtd_values.size()
        << " held records had no reference in their length window; excluded from wtd bounds\n";
  }
  CalibrationParams params = calibrate(wtu, wtd_values, cfg);
  if (params.wtu_min == params.wtu_max) {
    err << "warning: all held-out Wass-to-Unif scores are identical; scaling is degenerate\n";
  }

  if (a.decision_threshold) {
    params.decision_threshold = *a.decision_threshold;
  } else if (a.decision_percentile) {
    std::vector<double> combo;
    for (std::size_t i = 0; i < held.size(); ++i) {
      if (exceeds_unif_threshold(wtu[i], params)) {
        combo.push_back(scale_wtu(wtu[i], params));
      } else if (wtd[i]) {
        combo.push_back(*wtd[i]);
      }
    }
    params.decision_threshold = percentile(combo, *a.decision_percentile);
  }
  save_calibration(params, a.out);
  out << calibration_to_json(params);
  return kExitOk;
}

// --- score -----------------------------------------------------------------

struct ScoreArgs {
  std::string input;
  std::string store;
  std::string calibration;
  std::string out;
  std::string detectors = "wtu,wtd,combo";
  std::string seeds;
  double convex_lambda = 0.5;
  std::size_t ngram_n = 4;
  std::size_t ngram_margin = 2;
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
};

int cmd_score(const ScoreArgs& a, ConfigFlags& flags, std::ostream& out, std::ostream& err) {
  ScoringOptions opts;
  opts.cfg = flags.resolve();
  opts.convex_lambda = a.convex_lambda;
  opts.ngram_n = a.ngram_n;
  opts.ngram_margin = a.ngram_margin;
  opts.threads = std::max<std::size_t>(1, a.threads);
  if (!(a.convex_lambda >= 0.0 && a.convex_lambda <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "convex lambda must lie in [0, 1]");
  }

  std::vector<std::string> keys;
  for (const auto& name : split_csv(a.detectors)) {
    auto kind = parse_detector(name);
    if (!kind) throw Error(ErrorCode::kInvalidConfig, "unknown detector " + name);
    if (std::find(opts.detectors.begin(), opts.detectors.end(), *kind) == opts.detectors.end()) {
      opts.detectors.push_back(*kind);
    }
  }
  if (opts.detectors.empty()) throw Error(ErrorCode::kInvalidConfig, "no detectors selected");
  for (const auto& d : all_detectors()) keys.emplace_back(d.key);

  auto wants = [&](DetectorKind k) {
    return std::find(opts.detectors.begin(), opts.detectors.end(), k) != opts.detectors.end();
  };
  std::optional<ReferenceStore> store;
  if (wants(DetectorKind::kWtd) || wants(DetectorKind::kCombo) || wants(DetectorKind::kConvex)) {
    if (a.store.empty()) throw Error(ErrorCode::kInvalidConfig, "--store is required for wtd/combo/convex");
    store = load_store(a.store);
    opts.store = &*store;
  }
  if (wants(DetectorKind::kCombo) || wants(DetectorKind::kConvex)) {
    if (a.calibration.empty()) {
      throw Error(ErrorCode::kInvalidConfig, "--calibration is required for combo/convex");
    }
    opts.calibration = load_calibration(a.calibration);
    const std::string expected = config_fingerprint(opts.cfg);
    if (!opts.calibration->config_fingerprint.empty() &&
        opts.calibration->config_fingerprint != expected) {
      throw Error(ErrorCode::kInvalidConfig,
                  "calibration was fitted with a different detector config (fingerprint " +
                      opts.calibration->config_fingerprint + ", current " + expected + ")");
    }
  }

  std::vector<std::uint64_t> seeds;
  if (a.seeds.empty()) {
    seeds.push_back(opts.cfg.seed);
  } else {
    for (const auto& s : split_csv(a.seeds)) {
      try {
        seeds.push_back(std::stoull(s));
      } catch (const std::exception&) {
        throw Error(ErrorCode::kInvalidConfig, "bad seed " + s);
      }
    }
  }

  const auto records = read_records(a.input);
  std::ofstream file;
  std::ostream* sink = &out;
  if (!a.out.empty()) {
    file.open(a.out, std::ios::trunc);
    if (!file) throw Error(ErrorCode::kIoError, "cannot open " + a.out + " for writing");
    sink = &file;
  }
  std::size_t inline_errors = 0;
  for (std::uint64_t seed : seeds) {
    opts.cfg.seed = seed;
    for (const auto& line : score_records(records, opts)) {
      inline_errors += line.errors.empty() ? 0 : 1;
      *sink << score_line_to_json(line, keys) << "\n";
    }
  }
  sink->flush();
  if (!*sink) throw Error(ErrorCode::kIoError, "write failed");
  if (inline_errors > 0) {
    err << "warning: " << inline_errors << " scored lines carry per-record errors\n";
  }
  return kExitOk;
}

// --- evaluate --------------------------------------------------------------

struct EvaluateArgs {
  std::string scores;
  std::string labels;
  double tpr_target = 0.9;
  std::string out;
  std::string roc_csv;
  std::string detectors;
};

struct LabelInfo {
  int label;
  std::optional<Category> category;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  if (!(a.tpr_target > 0.0 && a.tpr_target <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "tpr target must lie in (0, 1]");
  }
  std::vector<std::string> label_order;
  std::map<std::string, LabelInfo> labels;
  {
    auto in = open_input(a.labels);
    RecordReader reader(in);
    AttentionRecord r;
    while (reader.next(r)) {
      if (!r.label) throw Error(ErrorCode::kDegenerateLabels, "record " + r.id + " has no label");
      if (!labels.emplace(r.id, LabelInfo{*r.label, r.category}).second) {
        throw Error(ErrorCode::kInvalidArgument, "duplicate label id " + r.id);
      }
      label_order.push_back(r.id);
    }
  }

  std::vector<std::uint64_t> seed_order;
  std::map<std::uint64_t, std::vector<ScoreLine>> by_seed;
  {
    auto in = open_input(a.scores);
    std::string text;
    std::size_t line_no = 0;
    while (std::getline(in, text)) {
      ++line_no;
      if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
      ScoreLine line;
      try {
        line = parse_score_line(text);
      } catch (const Error& e) {
        throw Error(e.code(), "scores line " + std::to_string(line_no) + ": " + e.what());
      }
      if (!by_seed.count(line.seed)) seed_order.push_back(line.seed);
      by_seed[line.seed].push_back(std::move(line));
    }
  }
  if (seed_order.empty()) throw Error(ErrorCode::kEmptyScores, "score file is empty");

  for (std::uint64_t seed : seed_order) {
    std::set<std::string> seen;
    for (const auto& line : by_seed[seed]) {
      if (!labels.count(line.id)) {
        throw Error(ErrorCode::kDegenerateLabels,
                    "id mismatch: scored id " + line.id + " has no label");
      }
      if (!seen.insert(line.id).second) {
        throw Error(ErrorCode::kDegenerateLabels, "id " + line.id + " scored twice for seed " +
                                                      std::to_string(seed));
      }
    }
    for (const auto& id : label_order) {
      if (!seen.count(id)) {
        throw Error(ErrorCode::kDegenerateLabels,
                    "id mismatch: labelled id " + id + " has no score for seed " +
                        std::to_string(seed));
      }
    }
  }

  std::set<std::string> present;
  for (const auto& [seed, lines] : by_seed) {
    for (const auto& l : lines) {
      for (const auto& [k, v] : l.scores) present.insert(k);
      for (const auto& [k, v] : l.errors) present.insert(k);
    }
  }
  std::vector<std::string> wanted = split_csv(a.detectors);

  std::vector<DetectorSummary> summaries;
  for (const auto& info : all_detectors()) {
    const std::string key(info.key);
    if (!present.count(key)) continue;
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), key) == wanted.end()) continue;
    DetectorSummary summary;
    summary.detector = std::string(info.display_name);
    for (std::uint64_t seed : seed_order) {
      std::vector<ScoredSample> samples;
      std::size_t missing = 0;
      for (const auto& line : by_seed[seed]) {
        auto it = line.scores.find(key);
        if (it == line.scores.end()) {
          ++missing;
          continue;
        }
        const LabelInfo& li = labels.at(line.id);
        samples.push_back({line.id, anomaly_score(it->second, info.orientation), li.label,
                           li.category});
      }
      summary.n_missing = std::max(summary.n_missing, missing);
      try {
        summary.runs.push_back(evaluate(samples, a.tpr_target));
      } catch (const Error& e) {
        throw Error(e.code(), summary.detector + ": " + e.what());
      }
      summary.seeds.push_back(seed);
    }
    if (summary.n_missing > 0) {
      err << "warning: " << summary.detector << ": " << summary.n_missing
          << " samples without a score were excluded\n";
    }
    for (const auto& note : summary.runs.front().notes) {
      err << "note: " << summary.detector << ": " << note << "\n";
    }
    summaries.push_back(std::move(summary));
  }

  out << format_table(summaries);
  if (!a.out.empty()) {
    std::ofstream f(a.out, std::ios::trunc);
    if (!f) throw Error(ErrorCode::kIoError, "cannot open " + a.out + " for writing");
    f << report_to_json(summaries);
  }
  if (!a.roc_csv.empty()) {
    std::ofstream f(a.roc_csv, std::ios::trunc);
    if (!f) throw Error(ErrorCode::kIoError, "cannot open " + a.roc_csv + " for writing");
    f << roc_to_csv(summaries);
  }
  return kExitOk;
}

// --- synth -----------------------------------------------------------------

struct SynthArgs {
  std::string held_out;
  std::string test_out;
  SynthConfig cfg;
};

void write_jsonl(const std::string& path, const std::vector<AttentionRecord>& records) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw Error(ErrorCode::kIoError, "cannot open " + path + " for writing");
  for (const auto& r : records) f << record_to_json(r) << "\n";
  if (!f) throw Error(ErrorCode::kIoError, "short write to " + path);
}

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  const SynthCorpus corpus = generate_synthetic_corpus(a.cfg);
  write_jsonl(a.held_out, corpus.held);
  write_jsonl(a.test_out, corpus.test);
  out << "held: " << corpus.held.size() << " records -> " << a.held_out << "\n";
  out << "test: " << corpus.test.size() << " records -> " << a.test_out << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Attention-based hallucination detection with optimal transport", "wassdet"};
  app.require_subcommand(1);

  BuildStoreArgs build_args;
  auto* build = app.add_subcommand("build-store", "Build a reference store from records");
  build->add_option("--input", build_args.input, "RecordFile (JSONL)")->required();
  build->add_option("--out", build_args.out, "Store file to write")->required();
  build->add_option("--quality-mode", build_args.quality_mode,
                    "top-n | all | forced-references")
      ->capture_default_str();
  build->add_option("--top-n", build_args.top_n, "Entries kept under top-n")
      ->capture_default_str();
  build->add_option("--tag", build_args.tag, "Dataset tag recorded in build_meta");
  build->add_option("--creation-time", build_args.creation_time,
                    "Override the recorded creation time");

  CalibrateArgs calib_args;
  ConfigFlags calib_flags;
  auto* calib = app.add_subcommand("calibrate", "Fit tau_wtu and min-max scaling bounds");
  calib->add_option("--store", calib_args.store, "Store file")->required();
  calib->add_option("--input", calib_args.input, "Held-out RecordFile")->required();
  calib->add_option("--out", calib_args.out, "Calibration JSON to write")->required();
  calib->add_option("--decision-threshold", calib_args.decision_threshold,
                    "Fixed Wass-Combo decision threshold");
  calib->add_option("--decision-percentile", calib_args.decision_percentile,
                    "Set the decision threshold to this percentile of held-out Wass-Combo scores");
  calib->add_option("--threads", calib_args.threads, "Worker threads")->capture_default_str();
  calib_flags.attach(calib);

  ScoreArgs score_args;
  ConfigFlags score_flags;
  auto* score = app.add_subcommand("score", "Score records with the selected detectors");
  score->add_option("--input", score_args.input, "RecordFile to score")->required();
  score->add_option("--store", score_args.store, "Store file");
  score->add_option("--calibration", score_args.calibration, "Calibration JSON");
  score->add_option("--out", score_args.out, "Score file (default: stdout)");
  score->add_option("--detectors", score_args.detectors,
                    "Comma-separated subset of wtu,wtd,combo,convex,ais,slp,ngram")
      ->capture_default_str();
  score->add_option("--seeds", score_args.seeds, "Comma-separated seeds (overrides --seed)");
  score->add_option("--convex-lambda", score_args.convex_lambda,
                    "Weight of Wass-to-Data in the convex combination")
      ->capture_default_str();
  score->add_option("--ngram-n", score_args.ngram_n, "n-gram order for the ngram heuristic")
      ->capture_default_str();
  score->add_option("--ngram-margin", score_args.ngram_margin,
                    "Required excess of the top target n-gram count")
      ->capture_default_str();
  score->add_option("--threads", score_args.threads, "Worker threads")->capture_default_str();
  score_flags.attach(score);

  EvaluateArgs eval_args;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "AUROC and FPR@TPR of score files");
  evaluate_cmd->add_option("--scores", eval_args.scores, "Score file")->required();
  evaluate_cmd->add_option("--labels", eval_args.labels, "Labelled RecordFile")->required();
  evaluate_cmd->add_option("--tpr-target", eval_args.tpr_target, "TPR of the FPR operating point")
      ->capture_default_str();
  evaluate_cmd->add_option("--out", eval_args.out, "Report JSON");
  evaluate_cmd->add_option("--roc-csv", eval_args.roc_csv, "ROC points CSV");
  evaluate_cmd->add_option("--detectors", eval_args.detectors, "Restrict to these detector keys");

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Write the synthetic benchmark corpus");
  synth->add_option("--held-out", synth_args.held_out, "Good-only reference corpus")->required();
  synth->add_option("--test-out", synth_args.test_out, "Labelled test corpus")->required();
  synth->add_option("--n-good", synth_args.cfg.n_good)->capture_default_str();
  synth->add_option("--n-peaked", synth_args.cfg.n_peaked)->capture_default_str();
  synth->add_option("--n-oscillatory", synth_args.cfg.n_oscillatory)->capture_default_str();
  synth->add_option("--n-held", synth_args.cfg.n_held)->capture_default_str();
  synth->add_option("--seed", synth_args.cfg.seed)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitParse;
  }

  try {
    if (build->parsed()) return cmd_build_store(build_args, out, err);
    if (calib->parsed()) return cmd_calibrate(calib_args, calib_flags, out, err);
    if (score->parsed()) return cmd_score(score_args, score_flags, out, err);
    if (evaluate_cmd->parsed()) return cmd_evaluate(eval_args, out, err);
    if (synth->parsed()) return cmd_synth(synth_args, out);
  } catch (const Error& e) {
    err << "wassdet: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return kExitParse;
}

}  // namespace wassdet
