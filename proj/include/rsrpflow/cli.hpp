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

#ifndef RSRPFLOW_CLI_HPP_
#define RSRPFLOW_CLI_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "rsrpflow/config.hpp"
#include "rsrpflow/report.hpp"

namespace rsrpflow {

// Entry point of the rsrpflow binary. Returns the process exit code; on
// failure exactly one line `error: <kind>: <message>` goes to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Command bodies, usable without argument parsing.
std::vector<std::filesystem::path> cmd_synth(const RunConfig& config);
Bundle cmd_run_all(const RunConfig& config, const FitObserver& observer = {});

}  // namespace rsrpflow

#endif  // RSRPFLOW_CLI_HPP_
