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

#include "wassdet/errors.h"

namespace wassdet {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNotADistribution: return "NotADistribution";
    case ErrorCode::kSupportMismatch: return "SupportMismatch";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kEmptyStream: return "EmptyStream";
    case ErrorCode::kMissingQuality: return "MissingQuality";
    case ErrorCode::kMissingLogprobs: return "MissingLogprobs";
    case ErrorCode::kMissingTokens: return "MissingTokens";
    case ErrorCode::kEmptyReferenceSet: return "EmptyReferenceSet";
    case ErrorCode::kEmptyScores: return "EmptyScores";
    case ErrorCode::kDegenerateLabels: return "DegenerateLabels";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kCorruptStore: return "CorruptStore";
  }
  return "Unknown";
}

}  // namespace wassdet
