/*
 * Copyright 2026 The FALE Plots Authors.
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

#include "fale/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <mutex>

namespace fale {
namespace log {
namespace {

Level parse_threshold() {
  const char* env = std::getenv("FALE_LOG");
  if (env == nullptr) return Level::kWarn;
  if (std::strcmp(env, "debug") == 0) return Level::kDebug;
  if (std::strcmp(env, "info") == 0) return Level::kInfo;
  if (std::strcmp(env, "warn") == 0) return Level::kWarn;
  return Level::kWarn;
}

const char* level_tag(Level level) {
  switch (level) {
    case Level::kDebug:
      return "debug";
    case Level::kInfo:
      return "info";
    default:
      return "warn";
  }
}

std::mutex& emit_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Level threshold() {
  static Level t = parse_threshold();
  return t;
}

void emit(Level level, const std::string& message) {
  std::lock_guard<std::mutex> lock(emit_mutex());
  std::fprintf(stderr, "fale[%s]: %s\n", level_tag(level), message.c_str());
}

}  // namespace log
}  // namespace fale
