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

// GbdtModel files are JSON documents; docs/model_format.md lists the fields.

#ifndef RSRPFLOW_MODEL_IO_HPP_
#define RSRPFLOW_MODEL_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>

#include "rsrpflow/gbdt.hpp"

namespace rsrpflow {

inline constexpr std::string_view kModelSchema = "rsrpflow.gbdt";
inline constexpr int kModelVersion = 1;

std::string model_to_json(const GbdtModel& model);
GbdtModel model_from_json(std::string_view text);

void save_model(const GbdtModel& model, const std::filesystem::path& path);
GbdtModel load_model(const std::filesystem::path& path);

}  // namespace rsrpflow

#endif  // RSRPFLOW_MODEL_IO_HPP_
