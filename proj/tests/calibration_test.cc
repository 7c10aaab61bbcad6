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

#include <gtest/gtest.h>

#include <filesystem>
#include <numeric>

#include "wassdet/errors.h"

namespace wassdet {
namespace {

TEST(Percentile, LinearInterpolation) {
  std::vector<double> grid(100);
  std::iota(grid.begin(), grid.end(), 1.0);
  EXPECT_NEAR(percentile(grid, 99.0), 99.01, 1e-12);
  EXPECT_NEAR(percentile(std::vector<double>{0.0, 1.0}, 99.0), 0.99, 1e-15);
  EXPECT_EQ(percentile(std::vector<double>{3.0, 3.0, 3.0}, 99.9), 3.0);
  EXPECT_EQ(percentile(std::vector<double>{5.0}, 50.0), 5.0);
  EXPECT_EQ(percentile(grid, 100.0), 100.0);
  EXPECT_EQ(percentile(grid, 0.0), 1.0);
}

TEST(Percentile, OrderDoesNotMatter) {
  std::vector<double> v = {4, 1, 3, 2};
  EXPECT_DOUBLE_EQ(percentile(v, 50.0), 2.5);
}

TEST(Percentile, EmptyThrows) {
  try {
    percentile(std::vector<double>{}, 99.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyScores);
  }
}

TEST(Calibrate, FitsTauAndBounds) {
  std::vector<double> wtu(100);
  std::iota(wtu.begin(), wtu.end(), 1.0);
  std::vector<double> wtd = {0.5, 0.1, 0.9};
  DetectorConfig cfg;
  cfg.percentile_k = 99.0;
  auto p = calibrate(wtu, wtd, cfg);
  EXPECT_NEAR(p.tau_wtu, 99.01, 1e-12);
  EXPECT_EQ(p.wtu_min, 1.0);
  EXPECT_EQ(p.wtu_max, 100.0);
  EXPECT_EQ(p.wtd_min, 0.1);
  EXPECT_EQ(p.wtd_max, 0.9);
  EXPECT_EQ(p.n_wtu, 100u);
  EXPECT_EQ(p.n_wtd, 3u);
  EXPECT_EQ(p.config_fingerprint, config_fingerprint(cfg));
  EXPECT_FALSE(p.decision_threshold.has_value());
}

TEST(Calibrate, IdenticalScores) {
  std::vector<double> wtu(10, 0.25);
  auto p = calibrate(wtu, std::vector<double>{0.1, 0.2}, DetectorConfig{});
  EXPECT_EQ(p.tau_wtu, 0.25);
  EXPECT_EQ(p.wtu_min, p.wtu_max);
  EXPECT_NO_THROW(p.validate());
  EXPECT_EQ(scale_wtu(0.9, p), 0.2);
}

TEST(Calibrate, EmptyInputsThrow) {
  std::vector<double> some = {0.1};
  EXPECT_THROW(calibrate({}, some, DetectorConfig{}), Error);
  EXPECT_THROW(calibrate(some, {}, DetectorConfig{}), Error);
}

TEST(ScaleWtu, AffineMap) {
  CalibrationParams p;
  p.wtu_min = 0.1;
  p.wtu_max = 0.5;
  p.wtd_min = 2.0;
  p.wtd_max = 4.0;
  p.tau_wtu = 0.4;
  EXPECT_EQ(scale_wtu(0.1, p), 2.0);
  EXPECT_EQ(scale_wtu(0.5, p), 4.0);
  EXPECT_DOUBLE_EQ(scale_wtu(0.3, p), 3.0);
  // Scores above the held-out maximum extrapolate past wtd_max.
  EXPECT_GT(scale_wtu(0.9, p), 4.0);
}

TEST(CalibrationJson, RoundTrip) {
  CalibrationParams p;
  p.tau_wtu = 0.123456789012345678;
  p.wtu_min = 0.01;
  p.wtu_max = 0.3;
  p.wtd_min = 0.0;
  p.wtd_max = 1.0 / 3.0;
  p.config_fingerprint = "abc";
  p.n_wtu = 7;
  p.n_wtd = 6;
  EXPECT_EQ(calibration_from_json(calibration_to_json(p)), p);
  p.decision_threshold = 0.2;
  auto path = std::filesystem::temp_directory_path() / "wassdet_calib_test.json";
  save_calibration(p, path);
  EXPECT_EQ(load_calibration(path), p);
  std::filesystem::remove(path);
}

TEST(CalibrationJson, RejectsBadInput) {
  EXPECT_THROW(calibration_from_json("not json"), Error);
  EXPECT_THROW(calibration_from_json("{\"tau_wtu\": 1}"), Error);
  // tau outside the wtu range
  EXPECT_THROW(calibration_from_json(
                   R"({"tau_wtu":2,"wtu_min":0,"wtu_max":1,"wtd_min":0,"wtd_max":1,)"
                   R"("decision_threshold":null,"config_fingerprint":"","n_wtu":1,"n_wtd":1})"),
               Error);
}

}  // namespace
}  // namespace wassdet
