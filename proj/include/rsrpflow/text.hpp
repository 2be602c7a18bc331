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

// Small text helpers shared by the CSV readers and writers. Numbers are
// written in shortest round-trip form so that save-then-load is bit exact.

#ifndef RSRPFLOW_TEXT_HPP_
#define RSRPFLOW_TEXT_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rsrpflow {

std::string format_double(double value);
// Like format_double but always keeps a decimal point ("1" -> "1.0").
std::string format_decimal(double value);

std::optional<double> parse_double(std::string_view text);
std::optional<std::int64_t> parse_int(std::string_view text);

std::vector<std::string_view> split(std::string_view line, char sep);
std::string_view trim(std::string_view text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// 64-bit FNV-1a. Used for report fingerprints and bundle checksums; stable
// across platforms, unlike std::hash.
class Fnv1a {
 public:
  Fnv1a& update(std::string_view bytes);
  Fnv1a& update(double value);
  Fnv1a& update(std::uint64_t value);
  std::uint64_t digest() const { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 14695981039346656037ULL;
};

std::string to_hex(std::uint64_t value);

}  // namespace rsrpflow

#endif  // RSRPFLOW_TEXT_HPP_
