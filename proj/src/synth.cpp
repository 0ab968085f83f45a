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

#include "fale/synth.hpp"

#include <algorithm>
#include <random>

#include "fale/error.hpp"

namespace fale {
namespace {

void validate(const SynthConfig& cfg) {
  if (cfg.n_rows == 0) throw ConfigError("n_rows must be positive");
  if (!(cfg.p1 > 0.0 && cfg.p1 < 1.0)) {
    throw ConfigError("protected fraction p1 must lie in (0,1)");
  }
  if (!(cfg.beta >= 0.0 && cfg.beta <= 1.0)) {
    throw ConfigError("beta must lie in [0,1]");
  }
  if (!(cfg.region_low < cfg.region_high)) {
    throw ConfigError("degenerate region: low boundary must be below high");
  }
}

// 53-bit uniform in [0,1); mt19937_64 output is pinned by the standard, so
// generated datasets are identical across platforms.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

bool in_region(const SynthConfig& cfg, double x) {
  return x >= cfg.region_low && x <= cfg.region_high;
}

}  // namespace

void SynthOracle::bind(const Dataset& ds) {
  x_col_ = ds.column_index("x");
  a_col_ = ds.column_index("a");
  bound_ = true;
}

double SynthOracle::score(double x, bool is_protected) const {
  double s = cfg_.base_intercept + cfg_.base_slope * x;
  if (is_protected && in_region(cfg_, x)) s -= cfg_.beta;
  return std::clamp(s, 0.0, 1.0);
}

std::vector<double> SynthOracle::predict_batch(const std::vector<Row>& batch) {
  if (!bound_) throw OracleError("synthetic oracle used before bind");
  std::vector<double> out;
  out.reserve(batch.size());
  for (const Row& row : batch) {
    out.push_back(score(row[x_col_], row[a_col_] == 1.0));
  }
  return out;
}

SynthBundle generate(const SynthConfig& cfg) {
  validate(cfg);
  std::vector<FeatureSchema> schema(3);
  schema[0].name = "x";
  schema[1].name = "a";
  schema[1].kind = FeatureKind::kCategorical;
  schema[1].role = FeatureRole::kProtected;
  schema[1].category_order = {"0", "1"};
  schema[2].name = "y";
  schema[2].role = FeatureRole::kTarget;

  SynthOracle scorer(cfg);
  std::mt19937_64 rng(cfg.seed);
  std::vector<Row> rows;
  rows.reserve(cfg.n_rows);
  for (std::size_t i = 0; i < cfg.n_rows; ++i) {
    const double x = uniform01(rng);
    const bool is_protected = uniform01(rng) < cfg.p1;
    const double s = scorer.score(x, is_protected);
    const double y = uniform01(rng) < s ? 1.0 : 0.0;
    rows.push_back({x, is_protected ? 1.0 : 0.0, y});
  }

  std::vector<std::vector<std::string>> categories(3);
  categories[1] = {"0", "1"};
  SynthBundle bundle{Dataset(std::move(schema), std::move(categories),
                             std::move(rows)),
                     std::make_shared<SynthOracle>(cfg)};
  bundle.oracle->bind(bundle.dataset);
  return bundle;
}

AnalyticFale analytic_fale(const SynthConfig& cfg, const BinPartition& p,
                           const UnfairnessMeasure& m, Centering centering) {
  validate(cfg);
  if (m.id != MeasureId::kStatisticalParity &&
      m.id != MeasureId::kSignedStatisticalParity) {
    throw ConfigError("analytic audit supports only the parity measures");
  }
  if (p.kind != FeatureKind::kNumeric) {
    throw ConfigError("analytic audit expects a numeric partition");
  }
  const std::size_t bins = p.bin_count();

  // With a constant-slope base, both groups' boundary scores are constant
  // within a group, so the parity gap at boundary x is exactly beta times
  // the region indicator (as long as no clamping kicks in, which holds for
  // the default config).
  const auto gap = [&](double x) {
    return in_region(cfg, x) ? cfg.beta : 0.0;
  };

  AnalyticFale out;
  out.deltas.resize(bins);
  out.accumulated.resize(bins);
  out.centered.resize(bins);
  double acc = 0.0;
  for (std::size_t k = 1; k <= bins; ++k) {
    out.deltas[k - 1] = gap(p.high_value(k)) - gap(p.low_value(k));
    acc += out.deltas[k - 1];
    out.accumulated[k - 1] = acc;
  }

  // Population weights come from the data the engine would see.
  const Dataset ds = generate(cfg).dataset;
  const std::size_t col = ds.column_index(p.feature.empty() ? "x" : p.feature);
  out.populations.assign(bins, 0);
  for (std::size_t r = 0; r < ds.row_count(); ++r) {
    out.populations[assign_bin(p, ds.cell(r, col)) - 1]++;
  }

  double offset = 0.0;
  if (centering == Centering::kWeighted) {
    const double total = static_cast<double>(ds.row_count());
    for (std::size_t i = 0; i < bins; ++i) {
      offset += static_cast<double>(out.populations[i]) / total *
                out.accumulated[i];
    }
  } else {
    for (double a : out.accumulated) offset += a;
    offset /= static_cast<double>(bins);
  }
  out.center_offset = offset;
  for (std::size_t i = 0; i < bins; ++i) {
    out.centered[i] = out.accumulated[i] - offset;
  }
  return out;
}

}  // namespace fale
