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

#ifndef RSRPFLOW_ERROR_HPP_
#define RSRPFLOW_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace rsrpflow {

// Every failure raised by the library carries one of these kinds. The CLI
// prints the kind verbatim so scripts can branch on it.
enum class ErrorKind {
  kParse,
  kOrder,
  kEmpty,
  kNegativeCount,
  kSpacing,
  kInvalidArgument,
  kMissingDay,
  kEmptyResult,
  kInsufficientRows,
  kInsufficientDays,
  kArityMismatch,
  kLengthMismatch,
  kUndefinedCorrelation,
  kZeroCover,
  kTooManyFeatures,
  kVersionMismatch,
  kCorruptFile,
  kIo,
  kConfig,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rsrpflow

#endif  // RSRPFLOW_ERROR_HPP_
