/*
 * Copyright 2026 The rsrpflow Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "rsrpflow/error.hpp"

namespace rsrpflow {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kOrder: return "order";
    case ErrorKind::kEmpty: return "empty";
    case ErrorKind::kNegativeCount: return "negative_count";
    case ErrorKind::kSpacing: return "spacing";
    case ErrorKind::kInvalidArgument: return "invalid_argument";
    case ErrorKind::kMissingDay: return "missing_day";
    case ErrorKind::kEmptyResult: return "empty_result";
    case ErrorKind::kInsufficientRows: return "insufficient_rows";
    case ErrorKind::kInsufficientDays: return "insufficient_days";
    case ErrorKind::kArityMismatch: return "arity_mismatch";
    case ErrorKind::kLengthMismatch: return "length_mismatch";
    case ErrorKind::kUndefinedCorrelation: return "undefined_correlation";
    case ErrorKind::kZeroCover: return "zero_cover";
    case ErrorKind::kTooManyFeatures: return "too_many_features";
    case ErrorKind::kVersionMismatch: return "version_mismatch";
    case ErrorKind::kCorruptFile: return "corrupt_file";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kConfig: return "config";
  }
  return "unknown";
}

}  // namespace rsrpflow
