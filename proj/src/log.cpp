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

#include "alphafair/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace alphafair {

static LogLevel parse_level() {
  const char* env = std::getenv("ALPHA_FAIR_LOG");
  if (env == nullptr) return LogLevel::off;
  if (std::strcmp(env, "debug") == 0) return LogLevel::debug;
  if (std::strcmp(env, "info") == 0) return LogLevel::info;
  return LogLevel::off;
}

LogLevel log_level() {
  static const LogLevel level = parse_level();
  return level;
}

bool log_enabled(LogLevel level) {
  return static_cast<int>(level) <= static_cast<int>(log_level());
}

void log_msg(LogLevel level, const std::string& msg) {
  if (!log_enabled(level)) return;
  std::fprintf(stderr, "[alphafair:%s] %s\n",
               level == LogLevel::debug ? "debug" : "info", msg.c_str());
}

}  // namespace alphafair
