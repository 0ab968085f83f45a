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

// Accumulated local effects. Per bin: every in-bin instance is scored twice
// with the examined feature overwritten by the bin's boundaries, the mean
// score difference is taken, and the per-bin means are accumulated and
// centered to (population-weighted) mean zero.

#ifndef FALE_ALE_HPP_
#define FALE_ALE_HPP_

#include <string>
#include <vector>

#include "fale/binning.hpp"
#include "fale/dataset.hpp"
#include "fale/oracle.hpp"

namespace fale {

enum class Centering { kWeighted, kUnweighted };

struct AleOptions {
  Centering centering = Centering::kWeighted;
  int jobs = 1;
  // Audit only these rows (defaults to the whole dataset).
  const std::vector<std::size_t>* subset = nullptr;
};

struct AleCurve {
  std::string feature;
  BinPartition partition;
  std::vector<std::size_t> bin_counts;
  // Accumulated estimate at each right bin boundary, before and after
  // subtracting the centering offset.
  std::vector<double> uncentered;
  std::vector<double> centered;
  double center_offset = 0.0;
  // Bins with no population contribute zero and stay flagged.
  std::vector<bool> empty_bins;
};

struct BinLocalEffect {
  double mean_effect = 0.0;
  std::size_t count = 0;
  bool empty = false;
};

// Mean local effect of bin k (1-based): average of f(x_high) - f(x_low)
// over the in-bin instances. Empty bins yield (0, 0) with the flag set.
BinLocalEffect bin_local_effect(const Dataset& ds, PredictionOracle& oracle,
                                const BinPartition& partition, std::size_t k,
                                const AleOptions& options = {});

AleCurve ale_curve(const Dataset& ds, PredictionOracle& oracle,
                   const BinPartition& partition,
                   const AleOptions& options = {});

}  // namespace fale

#endif  // FALE_ALE_HPP_
