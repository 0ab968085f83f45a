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

// Ordered bin partitions over one feature. Numeric bins follow the
// half-open convention (low, high] with the lowest boundary nudged one ulp
// below the observed minimum, so the minimum lands in bin 1. Categorical
// features get one bin per label; local effects difference consecutive
// labels, so bin 1 pairs a label with itself.

#ifndef FALE_BINNING_HPP_
#define FALE_BINNING_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fale/dataset.hpp"

namespace fale {

enum class BinStrategy { kQuantile, kFixedWidth };

struct BinPartition {
  std::string feature;
  FeatureKind kind = FeatureKind::kNumeric;
  // Numeric only: K+1 strictly increasing boundaries.
  std::vector<double> boundaries;
  // Categorical only: K labels in bin order and their dictionary codes.
  std::vector<std::string> labels;
  std::vector<std::int32_t> codes;
  // Set when the feature is constant (single degenerate bin).
  bool constant = false;

  std::size_t bin_count() const {
    return kind == FeatureKind::kNumeric ? boundaries.size() - 1
                                         : labels.size();
  }

  // Encoded boundary values of bin k (1-based): what the examined feature is
  // overwritten with when building the low/high hypothetical instances.
  double low_value(std::size_t k) const;
  double high_value(std::size_t k) const;

  // Curve x position of bin k: the right boundary for numeric features, the
  // 1-based category position otherwise.
  double x_position(std::size_t k) const;
};

// Boundaries at empirical quantile levels j/k, linearly interpolated
// between order statistics. Duplicate boundaries are merged, so the
// effective bin count can be below k.
BinPartition quantile_partition(std::vector<double> values, int k,
                                const std::string& feature = "");

BinPartition fixed_width_partition(const std::vector<double>& values, int k,
                                   const std::string& feature = "");

// One bin per distinct label. Order: the caller-supplied order when given
// (must cover every observed label), otherwise ascending frequency with
// lexicographic tie-break.
BinPartition categorical_partition(
    const std::vector<std::string>& values,
    const std::optional<std::vector<std::string>>& order = std::nullopt,
    const std::string& feature = "");

// Partition a dataset column with the defaults above. Numeric columns use
// the requested strategy and bin count; categorical columns use
// order_override when given, else the schema's category_order when present.
// Either order is restricted to the labels observed in the subset.
BinPartition partition_column(
    const Dataset& ds, std::size_t col, BinStrategy strategy, int k,
    const std::vector<std::size_t>* subset = nullptr,
    const std::optional<std::vector<std::string>>& order_override =
        std::nullopt);

// 1-based bin index of an encoded value; throws DataError when the value is
// outside the partition.
std::size_t assign_bin(const BinPartition& p, double value);

}  // namespace fale

#endif  // FALE_BINNING_HPP_
