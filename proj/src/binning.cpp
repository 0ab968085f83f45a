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

#include "fale/binning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "fale/error.hpp"

namespace fale {
namespace {

double nudge_below(double v) {
  double lower = std::nextafter(v, -std::numeric_limits<double>::infinity());
  return std::isfinite(lower) ? lower : v;
}

// Interpolated order statistic at level p (numpy's default convention).
double quantile_sorted(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = p * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

BinPartition from_edges(std::vector<double> edges, const std::string& feature,
                        double min_value) {
  // Merge duplicate boundaries; a fully constant feature collapses to one
  // degenerate bin.
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  BinPartition p;
  p.feature = feature;
  p.kind = FeatureKind::kNumeric;
  if (edges.size() == 1) {
    p.constant = true;
    p.boundaries = {nudge_below(edges[0]), edges[0]};
    return p;
  }
  edges[0] = nudge_below(min_value);
  p.boundaries = std::move(edges);
  return p;
}

void check_inputs(const std::vector<double>& values, int k) {
  if (values.empty()) throw DataError("cannot bin an empty value set");
  if (k < 1) throw ConfigError("bin count must be >= 1");
  for (double v : values) {
    if (!std::isfinite(v)) throw DataError("non-finite value in bin input");
  }
}

}  // namespace

double BinPartition::low_value(std::size_t k) const {
  if (kind == FeatureKind::kNumeric) return boundaries[k - 1];
  return static_cast<double>(codes[k >= 2 ? k - 2 : 0]);
}

double BinPartition::high_value(std::size_t k) const {
  if (kind == FeatureKind::kNumeric) return boundaries[k];
  return static_cast<double>(codes[k - 1]);
}

double BinPartition::x_position(std::size_t k) const {
  if (kind == FeatureKind::kNumeric) return boundaries[k];
  return static_cast<double>(k);
}

BinPartition quantile_partition(std::vector<double> values, int k,
                                const std::string& feature) {
  check_inputs(values, k);
  std::sort(values.begin(), values.end());
  std::vector<double> edges;
  edges.reserve(static_cast<std::size_t>(k) + 1);
  for (int j = 0; j <= k; ++j) {
    edges.push_back(
        quantile_sorted(values, static_cast<double>(j) / k));
  }
  return from_edges(std::move(edges), feature, values.front());
}

BinPartition fixed_width_partition(const std::vector<double>& values, int k,
                                   const std::string& feature) {
  check_inputs(values, k);
  const auto [min_it, max_it] = std::minmax_element(values.begin(),
                                                    values.end());
  const double lo = *min_it;
  const double hi = *max_it;
  std::vector<double> edges;
  edges.reserve(static_cast<std::size_t>(k) + 1);
  for (int j = 0; j <= k; ++j) {
    edges.push_back(j == k ? hi : lo + (hi - lo) * j / k);
  }
  return from_edges(std::move(edges), feature, lo);
}

BinPartition categorical_partition(
    const std::vector<std::string>& values,
    const std::optional<std::vector<std::string>>& order,
    const std::string& feature) {
  if (values.empty()) throw DataError("cannot bin an empty value set");
  std::map<std::string, std::size_t> freq;
  for (const auto& v : values) ++freq[v];

  BinPartition p;
  p.feature = feature;
  p.kind = FeatureKind::kCategorical;
  if (order.has_value()) {
    for (const auto& label : *order) p.labels.push_back(label);
    for (const auto& [label, count] : freq) {
      (void)count;
      if (std::find(p.labels.begin(), p.labels.end(), label) ==
          p.labels.end()) {
        throw DataError("category order is missing observed label '" + label +
                        "'");
      }
    }
  } else {
    // Ascending frequency; std::map iteration gives the lexicographic
    // tie-break via stable_sort.
    std::vector<std::pair<std::string, std::size_t>> by_freq(freq.begin(),
                                                             freq.end());
    std::stable_sort(by_freq.begin(), by_freq.end(),
                     [](const auto& a, const auto& b) {
                       return a.second < b.second;
                     });
    for (const auto& [label, count] : by_freq) {
      (void)count;
      p.labels.push_back(label);
    }
  }
  // Codes default to positions in the bin order; partition_column overrides
  // them with the dataset dictionary.
  p.codes.resize(p.labels.size());
  for (std::size_t i = 0; i < p.labels.size(); ++i) {
    p.codes[i] = static_cast<std::int32_t>(i);
  }
  return p;
}

BinPartition partition_column(
    const Dataset& ds, std::size_t col, BinStrategy strategy, int k,
    const std::vector<std::size_t>* subset,
    const std::optional<std::vector<std::string>>& order_override) {
  const FeatureSchema& schema = ds.schema()[col];
  std::vector<std::size_t> all;
  if (subset == nullptr) {
    all.resize(ds.row_count());
    for (std::size_t r = 0; r < all.size(); ++r) all[r] = r;
    subset = &all;
  }
  if (subset->empty()) throw DataError("cannot bin an empty row subset");

  if (schema.kind == FeatureKind::kNumeric) {
    if (order_override) {
      throw ConfigError("category order applies to categorical features; '" +
                        schema.name + "' is numeric");
    }
    std::vector<double> values;
    values.reserve(subset->size());
    for (std::size_t r : *subset) values.push_back(ds.cell(r, col));
    return strategy == BinStrategy::kQuantile
               ? quantile_partition(std::move(values), k, schema.name)
               : fixed_width_partition(values, k, schema.name);
  }

  std::vector<std::string> labels;
  labels.reserve(subset->size());
  for (std::size_t r : *subset) {
    labels.push_back(ds.categories(col)[static_cast<std::size_t>(
        ds.cell(r, col))]);
  }
  std::optional<std::vector<std::string>> order;
  const std::vector<std::string>* declared = nullptr;
  if (order_override) {
    declared = &*order_override;
  } else if (!schema.category_order.empty()) {
    declared = &schema.category_order;
  }
  if (declared != nullptr) {
    // The declared order may include labels unseen in the subset; keep only
    // observed ones so every bin has population.
    std::vector<std::string> observed;
    for (const auto& label : *declared) {
      if (std::find(labels.begin(), labels.end(), label) != labels.end()) {
        observed.push_back(label);
      }
    }
    order = std::move(observed);
  }
  BinPartition p = categorical_partition(labels, order, schema.name);
  for (std::size_t i = 0; i < p.labels.size(); ++i) {
    const std::int32_t code = ds.code_of(col, p.labels[i]);
    if (code < 0) throw DataError("label vanished from dictionary");
    p.codes[i] = code;
  }
  return p;
}

std::size_t assign_bin(const BinPartition& p, double value) {
  if (p.kind == FeatureKind::kNumeric) {
    const auto& b = p.boundaries;
    if (value <= b.front() || value > b.back()) {
      throw DataError("value out of partition range");
    }
    const auto it = std::lower_bound(b.begin() + 1, b.end(), value);
    return static_cast<std::size_t>(it - b.begin());
  }
  const auto code = static_cast<std::int32_t>(value);
  for (std::size_t i = 0; i < p.codes.size(); ++i) {
    if (p.codes[i] == code) return i + 1;
  }
  throw DataError("categorical value not covered by partition");
}

}  // namespace fale
