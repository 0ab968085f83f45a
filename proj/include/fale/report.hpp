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

// Machine-readable audit reports, format tag "fale-report-v1". Reals are
// serialized as shortest round-trip decimals, so reading a report back
// reconstructs the curve bit for bit.

#ifndef FALE_REPORT_HPP_
#define FALE_REPORT_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include "fale/ale.hpp"
#include "fale/fale.hpp"

namespace fale {

// Run provenance echoed into the report. Unset fields serialize as null.
struct RunMeta {
  std::string dataset_path;
  std::string dataset_fingerprint;
  std::string model;
  std::string command_line;
  std::string bin_strategy;
  std::string centering;
  std::optional<std::uint64_t> seed;
};

std::string write_report(const FaleCurve& curve, const RunMeta& meta = {});
FaleCurve read_report(const std::string& json_text);

std::string write_ale_report(const AleCurve& curve, const RunMeta& meta = {});
AleCurve read_ale_report(const std::string& json_text);

// Field-by-field equality, exact on all reals. Used by round-trip checks.
bool curves_equal(const FaleCurve& a, const FaleCurve& b);
bool curves_equal(const AleCurve& a, const AleCurve& b);

void save_text(const std::string& path, const std::string& text);
std::string load_text(const std::string& path);

}  // namespace fale

#endif  // FALE_REPORT_HPP_
