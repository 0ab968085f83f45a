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

#include "fale/ale.hpp"

#include <numeric>

#include "fale/error.hpp"
#include "fale/kernels.hpp"
#include "fale/log.hpp"
#include "fale/parallel.hpp"

namespace fale {
namespace {

std::vector<std::size_t> default_subset(const Dataset& ds) {
  std::vector<std::size_t> all(ds.row_count());
  std::iota(all.begin(), all.end(), 0);
  return all;
}

// Row indices per bin, in subset order.
std::vector<std::vector<std::size_t>> bin_members(
    const Dataset& ds, std::size_t col, const BinPartition& partition,
    const std::vector<std::size_t>& subset) {
  std::vector<std::vector<std::size_t>> members(partition.bin_count());
  for (std::size_t r : subset) {
    const std::size_t k = assign_bin(partition, ds.cell(r, col));
    members[k - 1].push_back(r);
  }
  return members;
}

// Scores the bin's instances at both boundaries: one all-low batch and one
// all-high batch, to keep oracle round trips at two per bin.
std::pair<std::vector<double>, std::vector<double>> boundary_scores(
    const Dataset& ds, PredictionOracle& oracle, std::size_t col,
    const BinPartition& partition, std::size_t k,
    const std::vector<std::size_t>& rows) {
  const double low = partition.low_value(k);
  const double high = partition.high_value(k);
  std::vector<Row> batch;
  batch.reserve(rows.size());
  for (std::size_t r : rows) {
    batch.push_back(ds.rows()[r]);
    batch.back()[col] = low;
  }
  std::vector<double> low_scores = oracle.predict_batch(batch);
  for (Row& row : batch) row[col] = high;
  std::vector<double> high_scores = oracle.predict_batch(batch);
  return {std::move(low_scores), std::move(high_scores)};
}

BinLocalEffect effect_for_members(const Dataset& ds, PredictionOracle& oracle,
                                  std::size_t col,
                                  const BinPartition& partition,
                                  std::size_t k,
                                  const std::vector<std::size_t>& rows) {
  BinLocalEffect result;
  result.count = rows.size();
  if (rows.empty()) {
    result.empty = true;
    return result;
  }
  auto [low_scores, high_scores] =
      boundary_scores(ds, oracle, col, partition, k, rows);
  std::vector<double> diffs(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    diffs[i] = high_scores[i] - low_scores[i];
  }
  result.mean_effect = kernels::stable_mean(std::move(diffs));
  return result;
}

}  // namespace

BinLocalEffect bin_local_effect(const Dataset& ds, PredictionOracle& oracle,
                                const BinPartition& partition, std::size_t k,
                                const AleOptions& options) {
  if (k < 1 || k > partition.bin_count()) {
    throw ConfigError("bin index out of range");
  }
  const std::size_t col = ds.column_index(partition.feature);
  const std::vector<std::size_t> subset =
      options.subset != nullptr ? *options.subset : default_subset(ds);
  const auto members = bin_members(ds, col, partition, subset);
  return effect_for_members(ds, oracle, col, partition, k, members[k - 1]);
}

AleCurve ale_curve(const Dataset& ds, PredictionOracle& oracle,
                   const BinPartition& partition, const AleOptions& options) {
  const std::size_t col = ds.column_index(partition.feature);
  const std::vector<std::size_t> subset =
      options.subset != nullptr ? *options.subset : default_subset(ds);
  const auto members = bin_members(ds, col, partition, subset);
  const std::size_t bins = partition.bin_count();

  std::vector<BinLocalEffect> effects(bins);
  const int jobs = oracle.concurrency_safe() ? options.jobs : 1;
  parallel_for_index(bins, jobs, [&](std::size_t i) {
    effects[i] =
        effect_for_members(ds, oracle, col, partition, i + 1, members[i]);
  });

  AleCurve curve;
  curve.feature = partition.feature;
  curve.partition = partition;
  std::size_t populated = 0;
  double accumulated = 0.0;
  for (std::size_t i = 0; i < bins; ++i) {
    curve.bin_counts.push_back(effects[i].count);
    curve.empty_bins.push_back(effects[i].empty);
    if (!effects[i].empty) ++populated;
    accumulated += effects[i].mean_effect;
    curve.uncentered.push_back(accumulated);
  }
  if (populated == 0) throw DataError("all bins empty");

  const double total = static_cast<double>(subset.size());
  double offset = 0.0;
  if (options.centering == Centering::kWeighted) {
    for (std::size_t i = 0; i < bins; ++i) {
      offset += static_cast<double>(curve.bin_counts[i]) / total *
                curve.uncentered[i];
    }
  } else {
    offset = kernels::sum(curve.uncentered) / static_cast<double>(bins);
  }
  curve.center_offset = offset;
  for (double u : curve.uncentered) curve.centered.push_back(u - offset);
  FALE_DEBUG("ale_curve(" << partition.feature << "): " << bins << " bins, "
                          << subset.size() << " rows");
  return curve;
}

}  // namespace fale
