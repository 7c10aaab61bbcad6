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

#include <filesystem>
#include <string>
#include <string_view>

#include "wassdet/detectors.h"

namespace wassdet {

/// CalibrationParams as a small JSON document:
/// {tau_wtu, wtu_min, wtu_max, wtd_min, wtd_max, decision_threshold,
///  config_fingerprint, n_wtu, n_wtd}. decision_threshold is null when unset.
std::string calibration_to_json(const CalibrationParams& params);
CalibrationParams calibration_from_json(std::string_view text);

void save_calibration(const CalibrationParams& params, const std::filesystem::path& path);
CalibrationParams load_calibration(const std::filesystem::path& path);

}  // namespace wassdet
