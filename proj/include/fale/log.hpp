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

#ifndef FALE_LOG_HPP_
#define FALE_LOG_HPP_

#include <sstream>
#include <string>

namespace fale {
namespace log {

enum class Level : int { kDebug = 0, kInfo = 1, kWarn = 2, kOff = 3 };

// Threshold comes from the FALE_LOG environment variable (debug|info|warn),
// default warn. Resolved once per process.
Level threshold();

void emit(Level level, const std::string& message);

inline bool enabled(Level level) {
  return static_cast<int>(level) >= static_cast<int>(threshold());
}

}  // namespace log
}  // namespace fale

#define FALE_LOG_AT(level, expr)                              \
  do {                                                        \
    if (::fale::log::enabled(level)) {                        \
      std::ostringstream fale_log_ss_;                        \
      fale_log_ss_ << expr;                                   \
      ::fale::log::emit(level, fale_log_ss_.str());           \
    }                                                         \
  } while (0)

#define FALE_DEBUG(expr) FALE_LOG_AT(::fale::log::Level::kDebug, expr)
#define FALE_INFO(expr) FALE_LOG_AT(::fale::log::Level::kInfo, expr)
#define FALE_WARN(expr) FALE_LOG_AT(::fale::log::Level::kWarn, expr)

#endif  // FALE_LOG_HPP_
