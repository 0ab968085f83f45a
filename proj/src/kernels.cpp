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

#include "fale/kernels.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>

#include "fale/log.hpp"

namespace fale {
namespace kernels {
namespace {

const Backend& select_backend() {
  const char* forced = std::getenv("FALE_KERNELS");
#if defined(__x86_64__) || defined(__i386__)
  if (forced != nullptr) {
    if (std::strcmp(forced, "scalar") == 0) return kScalarBackend;
    if (std::strcmp(forced, "avx2") == 0) return kAvx2Backend;
    FALE_WARN("unknown FALE_KERNELS value '" << forced
                                             << "', using auto detection");
  }
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    return kAvx2Backend;
  }
  return kScalarBackend;
#else
  if (forced != nullptr && std::strcmp(forced, "scalar") != 0) {
    FALE_WARN("FALE_KERNELS=" << forced << " unavailable on this target");
  }
  return kScalarBackend;
#endif
}

}  // namespace

const Backend& active() {
  static const Backend& backend = select_backend();
  return backend;
}

std::string active_name() { return active().name; }

double stable_mean(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  return sum(values) / static_cast<double>(values.size());
}

}  // namespace kernels
}  // namespace fale
