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

#include "fale/fale.hpp"

#include <optional>

#include "fale/error.hpp"
#include "fale/log.hpp"
#include "fale/parallel.hpp"

namespace fale {
namespace {

// In-bin member rows split by group, ascending row order within each group.
struct BinGroups {
  std::vector<std::size_t> g0;
  std::vector<std::size_t> g1;
};

std::vector<BinGroups> gather_bins(const Dataset& ds, std::size_t col,
                                   const BinPartition& partition,
                                   const GroupSplit& split) {
  std::vector<BinGroups> bins(partition.bin_count());
  for (std::size_t r : split.non_protected) {
    bins[assign_bin(partition, ds.cell(r, col)) - 1].g0.push_back(r);
  }
  for (std::size_t r : split.protected_rows) {
    bins[assign_bin(partition, ds.cell(r, col)) - 1].g1.push_back(r);
  }
  return bins;
}

std::size_t resolve_target(const Dataset& ds) {
  for (std::size_t i = 0; i < ds.schema().size(); ++i) {
    if (ds.schema()[i].role == FeatureRole::kTarget) return i;
  }
  throw ConfigError("equal opportunity requires a target column in the schema");
}

std::vector<int> gather_labels(const Dataset& ds, std::size_t target_col,
                               const std::vector<std::size_t>& rows) {
  std::vector<int> labels;
  labels.reserve(rows.size());
  for (std::size_t r : rows) {
    const double v = ds.cell(r, target_col);
    if (v != 0.0 && v != 1.0) {
      throw DataError("target column '" + ds.schema()[target_col].name +
                      "' must be binary (0/1) for equal opportunity");
    }
    labels.push_back(v == 1.0 ? 1 : 0);
  }
  return labels;
}

// Scores both groups at one boundary with a single oracle round trip.
void score_boundary(const Dataset& ds, PredictionOracle& oracle,
                    std::size_t col, double value, const BinGroups& members,
                    std::vector<double>& out0, std::vector<double>& out1) {
  std::vector<Row> batch;
  batch.reserve(members.g0.size() + members.g1.size());
  for (std::size_t r : members.g0) {
    batch.push_back(ds.rows()[r]);
    batch.back()[col] = value;
  }
  for (std::size_t r : members.g1) {
    batch.push_back(ds.rows()[r]);
    batch.back()[col] = value;
  }
  std::vector<double> scores = oracle.predict_batch(batch);
  const auto mid = scores.begin() + static_cast<std::ptrdiff_t>(members.g0.size());
  out0.assign(scores.begin(), mid);
  out1.assign(mid, scores.end());
}

BinResult compute_bin(const Dataset& ds, PredictionOracle& oracle,
                      const UnfairnessMeasure& measure,
                      const BinPartition& partition, std::size_t k,
                      std::size_t col, const BinGroups& members,
                      const std::optional<std::size_t>& target_col) {
  BinResult result;
  result.index = k;
  result.low = partition.low_value(k);
  result.high = partition.high_value(k);
  result.n0 = members.g0.size();
  result.n1 = members.g1.size();
  if (result.n0 == 0 || result.n1 == 0) {
    result.degenerate = true;
    return result;
  }
  GroupPredictions g0_low, g1_low, g0_high, g1_high;
  score_boundary(ds, oracle, col, result.low, members, g0_low.scores,
                 g1_low.scores);
  score_boundary(ds, oracle, col, result.high, members, g0_high.scores,
                 g1_high.scores);
  if (target_col) {
    // Ground truth travels with the instance; perturbing the examined
    // feature does not change it.
    g0_low.labels = gather_labels(ds, *target_col, members.g0);
    g1_low.labels = gather_labels(ds, *target_col, members.g1);
    g0_high.labels = g0_low.labels;
    g1_high.labels = g1_low.labels;
  }
  try {
    result.u_low = evaluate(measure, g0_low, g1_low);
    result.u_high = evaluate(measure, g0_high, g1_high);
    result.delta = result.u_high - result.u_low;
  } catch (const MeasureUndefined&) {
    result.u_low = 0.0;
    result.u_high = 0.0;
    result.delta = 0.0;
    result.degenerate = true;
  }
  return result;
}

UnfairnessMeasure absolute_measure(const UnfairnessMeasure& m) {
  if (m.id == MeasureId::kSignedStatisticalParity) {
    return UnfairnessMeasure::make(MeasureId::kStatisticalParity);
  }
  return m;
}

void check_examined_feature(const BinPartition& partition,
                            const ProtectedSpec& spec) {
  if (partition.feature == spec.attribute) {
    throw ConfigError("examined feature '" + partition.feature +
                      "' is the protected attribute");
  }
}

}  // namespace

BinResult bin_effect(const Dataset& ds, PredictionOracle& oracle,
                     const UnfairnessMeasure& measure,
                     const BinPartition& partition, std::size_t k,
                     const ProtectedSpec& spec) {
  check_examined_feature(partition, spec);
  if (k < 1 || k > partition.bin_count()) {
    throw ConfigError("bin index out of range");
  }
  const std::size_t col = ds.column_index(partition.feature);
  const GroupSplit split = split_by_protected(ds, spec);
  std::optional<std::size_t> target_col;
  if (measure.needs_labels) target_col = resolve_target(ds);
  const auto bins = gather_bins(ds, col, partition, split);
  return compute_bin(ds, oracle, measure, partition, k, col, bins[k - 1],
                     target_col);
}

FaleCurve fale_curve(const Dataset& ds, PredictionOracle& oracle,
                     const UnfairnessMeasure& measure,
                     const BinPartition& partition, const ProtectedSpec& spec,
                     const FaleOptions& options) {
  check_examined_feature(partition, spec);
  const std::size_t col = ds.column_index(partition.feature);
  const GroupSplit split = split_by_protected(ds, spec);
  std::optional<std::size_t> target_col;
  if (measure.needs_labels) target_col = resolve_target(ds);
  const auto bins = gather_bins(ds, col, partition, split);
  const std::size_t bin_count = partition.bin_count();

  FaleCurve curve;
  curve.feature = partition.feature;
  curve.partition = partition;
  curve.protected_spec = spec;
  curve.measure = measure;
  curve.excluded_rows = split.excluded;
  curve.per_bin.resize(bin_count);

  const int jobs = oracle.concurrency_safe() ? options.jobs : 1;
  parallel_for_index(bin_count, jobs, [&](std::size_t i) {
    curve.per_bin[i] = compute_bin(ds, oracle, measure, partition, i + 1, col,
                                   bins[i], target_col);
  });

  std::size_t auditable = 0;
  double accumulated = 0.0;
  for (BinResult& bin : curve.per_bin) {
    if (!bin.degenerate) ++auditable;
    accumulated += bin.delta;
    bin.accumulated = accumulated;
  }
  if (auditable == 0) {
    throw DataError("no auditable bins for feature '" + partition.feature +
                    "'");
  }

  const double total = static_cast<double>(split.non_protected.size() +
                                           split.protected_rows.size());
  double offset = 0.0;
  if (options.centering == Centering::kWeighted) {
    for (const BinResult& bin : curve.per_bin) {
      offset += static_cast<double>(bin.n0 + bin.n1) / total * bin.accumulated;
    }
  } else {
    for (const BinResult& bin : curve.per_bin) offset += bin.accumulated;
    offset /= static_cast<double>(bin_count);
  }
  curve.center_offset = offset;
  for (BinResult& bin : curve.per_bin) bin.centered = bin.accumulated - offset;

  curve.global_unfairness =
      global_unfairness(ds, oracle, absolute_measure(measure), spec);
  FALE_DEBUG("fale_curve(" << partition.feature << "): " << bin_count
                           << " bins, " << auditable << " auditable, global "
                           << curve.global_unfairness);
  return curve;
}

double global_unfairness(const Dataset& ds, PredictionOracle& oracle,
                         const UnfairnessMeasure& measure,
                         const ProtectedSpec& spec) {
  const GroupSplit split = split_by_protected(ds, spec);
  std::optional<std::size_t> target_col;
  if (measure.needs_labels) target_col = resolve_target(ds);

  const auto score_rows = [&](const std::vector<std::size_t>& rows) {
    std::vector<Row> batch;
    batch.reserve(rows.size());
    for (std::size_t r : rows) batch.push_back(ds.rows()[r]);
    return oracle.predict_batch(batch);
  };

  GroupPredictions g0, g1;
  g0.scores = score_rows(split.non_protected);
  g1.scores = score_rows(split.protected_rows);
  if (target_col) {
    g0.labels = gather_labels(ds, *target_col, split.non_protected);
    g1.labels = gather_labels(ds, *target_col, split.protected_rows);
  }
  return evaluate(measure, g0, g1);
}

}  // namespace fale
