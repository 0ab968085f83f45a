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

// Synthetic benchmark with known injected subgroup bias. The generated
// scoring oracle penalizes protected instances whose feature value falls in
// a declared region, so the expected audit curve has a closed form that the
// estimator can be checked against.

#ifndef FALE_SYNTH_HPP_
#define FALE_SYNTH_HPP_

#include <cstdint>
#include <memory>
#include <vector>

#include "fale/ale.hpp"
#include "fale/binning.hpp"
#include "fale/dataset.hpp"
#include "fale/fairness.hpp"
#include "fale/oracle.hpp"

namespace fale {

struct SynthConfig {
  std::size_t n_rows = 1000;
  double p1 = 0.3;  // protected fraction, in (0,1)
  // base(x) = intercept + slope * x
  double base_intercept = 0.5;
  double base_slope = 0.0;
  // Bias region on x; membership is closed on both ends.
  double region_low = 0.6;
  double region_high = 0.8;
  double beta = 0.3;  // score penalty, in [0,1]
  std::uint64_t seed = 0;
};

// score(x, a) = clamp(base(x) - beta * [a = 1 and x in region], 0, 1).
// Deterministic and stateless, hence safe for concurrent batches.
class SynthOracle final : public PredictionOracle {
 public:
  explicit SynthOracle(const SynthConfig& cfg) : cfg_(cfg) {}

  void bind(const Dataset& ds) override;
  std::vector<double> predict_batch(const std::vector<Row>& batch) override;
  bool concurrency_safe() const override { return true; }

  double score(double x, bool is_protected) const;

 private:
  SynthConfig cfg_;
  std::size_t x_col_ = 0;
  std::size_t a_col_ = 1;
  bool bound_ = false;
};

struct SynthBundle {
  Dataset dataset;
  std::shared_ptr<SynthOracle> oracle;
};

// Columns: x numeric uniform on [0,1]; a categorical "0"/"1" (protected
// role, "1" = protected) Bernoulli(p1); y numeric 0/1 target drawn
// Bernoulli(score). Same seed, same dataset.
SynthBundle generate(const SynthConfig& cfg);

// Expected audit values for the generated oracle in closed form: the group
// score gap at a boundary x is beta when x lies in the region, zero
// otherwise, so each bin's delta is the gap difference of its two
// boundaries. Accumulation and the population-weighted centering follow the
// engine's conventions; the populations come from regenerating the dataset
// from the same config.
struct AnalyticFale {
  std::vector<double> deltas;
  std::vector<double> accumulated;
  std::vector<double> centered;
  double center_offset = 0.0;
  // Retained rows per bin (weights used for centering).
  std::vector<std::size_t> populations;
};

AnalyticFale analytic_fale(const SynthConfig& cfg, const BinPartition& p,
                           const UnfairnessMeasure& m,
                           Centering centering = Centering::kWeighted);

}  // namespace fale

#endif  // FALE_SYNTH_HPP_
