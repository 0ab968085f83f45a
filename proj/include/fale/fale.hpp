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

// Fairness-aware accumulated local effects. Each bin's instances are split
// by the protected attribute and scored twice, with the examined feature
// overwritten by the bin's low and high boundaries while everything else
// (including the protected attribute) keeps its true value. The unfairness
// gap between those two hypothetical populations is the bin's delta; deltas
// accumulate across bins and the curve is shifted to mean zero.

#ifndef FALE_FALE_HPP_
#define FALE_FALE_HPP_

#include <string>
#include <vector>

#include "fale/ale.hpp"
#include "fale/binning.hpp"
#include "fale/dataset.hpp"
#include "fale/fairness.hpp"
#include "fale/oracle.hpp"

namespace fale {

struct FaleOptions {
  Centering centering = Centering::kWeighted;
  int jobs = 1;
};

struct BinResult {
  std::size_t index = 0;  // 1-based
  // Encoded boundary values the examined feature was overwritten with.
  double low = 0.0;
  double high = 0.0;
  std::size_t n0 = 0;  // non-protected instances in the bin
  std::size_t n1 = 0;  // protected instances in the bin
  double u_low = 0.0;
  double u_high = 0.0;
  double delta = 0.0;  // u_high - u_low
  double accumulated = 0.0;
  double centered = 0.0;
  // One group empty, or the measure undefined on the bin: the bin
  // contributes zero and is flagged instead of erroring.
  bool degenerate = false;
};

struct FaleCurve {
  std::string feature;
  BinPartition partition;
  ProtectedSpec protected_spec;
  UnfairnessMeasure measure;
  std::vector<BinResult> per_bin;
  // Unfairness of the unperturbed predictions over all retained rows,
  // always under the absolute measure (the plot's baseline value).
  double global_unfairness = 0.0;
  double center_offset = 0.0;
  // Rows whose protected attribute matched neither spec value.
  std::size_t excluded_rows = 0;
};

// Single-bin audit (accumulated/centered stay zero). The examined feature
// must differ from the protected attribute.
BinResult bin_effect(const Dataset& ds, PredictionOracle& oracle,
                     const UnfairnessMeasure& measure,
                     const BinPartition& partition, std::size_t k,
                     const ProtectedSpec& spec);

FaleCurve fale_curve(const Dataset& ds, PredictionOracle& oracle,
                     const UnfairnessMeasure& measure,
                     const BinPartition& partition, const ProtectedSpec& spec,
                     const FaleOptions& options = {});

// Dataset-level unfairness of the model as-is: the measure applied to the
// unperturbed predictions of the retained rows split by the protected
// attribute.
double global_unfairness(const Dataset& ds, PredictionOracle& oracle,
                         const UnfairnessMeasure& measure,
                         const ProtectedSpec& spec);

}  // namespace fale

#endif  // FALE_FALE_HPP_
