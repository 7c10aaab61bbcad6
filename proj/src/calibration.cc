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

#include "wassdet/calibration.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "wassdet/errors.h"

namespace wassdet {

double percentile(std::span<const double> values, double k) {
  if (values.empty()) throw Error(ErrorCode::kEmptyScores, "percentile of an empty list");
  if (!(k >= 0.0 && k <= 100.0)) {
    throw Error(ErrorCode::kInvalidArgument, "percentile rank must lie in [0, 100]");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double h = static_cast<double>(sorted.size() - 1) * k / 100.0;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  const double a = sorted[lo];
  const double b = sorted[lo + 1];
  // Interpolate from the nearer endpoint so the result stays within [a, b].
  return frac < 0.5 ? a + (b - a) * frac : b - (b - a) * (1.0 - frac);
}

CalibrationParams calibrate(std::span<const double> store_scores_wtu,
                            std::span<const double> store_scores_wtd,
                            const DetectorConfig& cfg) {
  if (store_scores_wtu.empty() || store_scores_wtd.empty()) {
    throw Error(ErrorCode::kEmptyScores, "calibration needs non-empty wtu and wtd scores");
  }
  cfg.validate();
  CalibrationParams p;
  p.tau_wtu = percentile(store_scores_wtu, cfg.percentile_k);
  const auto [wtu_lo, wtu_hi] =
      std::minmax_element(store_scores_wtu.begin(), store_scores_wtu.end());
  const auto [wtd_lo, wtd_hi] =
      std::minmax_element(store_scores_wtd.begin(), store_scores_wtd.end());
  p.wtu_min = *wtu_lo;
  p.wtu_max = *wtu_hi;
  p.wtd_min = *wtd_lo;
  p.wtd_max = *wtd_hi;
  p.config_fingerprint = config_fingerprint(cfg);
  p.n_wtu = store_scores_wtu.size();
  p.n_wtd = store_scores_wtd.size();
  return p;
}

double scale_wtu(double s_wtu, const CalibrationParams& params) {
  const double span = params.wtu_max - params.wtu_min;
  if (span == 0.0) return params.wtd_max;
  return params.wtd_min + (s_wtu - params.wtu_min) / span * (params.wtd_max - params.wtd_min);
}

void CalibrationParams::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvalidConfig, what); };
  for (double v : {tau_wtu, wtu_min, wtu_max, wtd_min, wtd_max}) {
    if (!std::isfinite(v)) fail("calibration values must be finite");
  }
  if (wtu_min > wtu_max) fail("wtu_min > wtu_max");
  if (wtd_min > wtd_max) fail("wtd_min > wtd_max");
  if (tau_wtu < wtu_min || tau_wtu > wtu_max) fail("tau_wtu outside [wtu_min, wtu_max]");
}

std::string calibration_to_json(const CalibrationParams& p) {
  nlohmann::ordered_json j;
  j["tau_wtu"] = p.tau_wtu;
  j["wtu_min"] = p.wtu_min;
  j["wtu_max"] = p.wtu_max;
  j["wtd_min"] = p.wtd_min;
  j["wtd_max"] = p.wtd_max;
  j["decision_threshold"] =
      p.decision_threshold ? nlohmann::ordered_json(*p.decision_threshold) : nullptr;
  j["config_fingerprint"] = p.config_fingerprint;
  j["n_wtu"] = p.n_wtu;
  j["n_wtd"] = p.n_wtd;
  return j.dump(2) + "\n";
}

CalibrationParams calibration_from_json(std::string_view text) {
  CalibrationParams p;
  try {
    const auto j = nlohmann::json::parse(text);
    p.tau_wtu = j.at("tau_wtu").get<double>();
    p.wtu_min = j.at("wtu_min").get<double>();
    p.wtu_max = j.at("wtu_max").get<double>();
    p.wtd_min = j.at("wtd_min").get<double>();
    p.wtd_max = j.at("wtd_max").get<double>();
    if (j.contains("decision_threshold") && !j["decision_threshold"].is_null()) {
      p.decision_threshold = j["decision_threshold"].get<double>();
    }
    p.config_fingerprint = j.value("config_fingerprint", std::string());
    p.n_wtu = j.value("n_wtu", std::size_t{0});
    p.n_wtd = j.value("n_wtd", std::size_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("calibration file: ") + e.what());
  }
  p.validate();
  return p;
}

void save_calibration(const CalibrationParams& params, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path.string() + " for writing");
  out << calibration_to_json(params);
  if (!out) throw Error(ErrorCode::kIoError, "short write to " + path.string());
}

CalibrationParams load_calibration(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return calibration_from_json(ss.str());
}

}  // namespace wassdet
