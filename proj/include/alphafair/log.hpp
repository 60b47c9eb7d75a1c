// Copyright 2026 The alphafair Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>

namespace alphafair {

// Diagnostics go to stderr only; level is read once from ALPHA_FAIR_LOG
// (off by default, "info" or "debug").
enum class LogLevel { off = 0, info = 1, debug = 2 };

LogLevel log_level();
bool log_enabled(LogLevel level);
void log_msg(LogLevel level, const std::string& msg);

}  // namespace alphafair
