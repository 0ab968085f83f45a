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

// Seeded generators for property tests: random tabular datasets with a
// binary protected attribute and random linear scoring models over them.

#ifndef FALE_TESTS_SUPPORT_GENERATORS_HPP_
#define FALE_TESTS_SUPPORT_GENERATORS_HPP_

#include <random>
#include <string>
#include <vector>

#include "fale/dataset.hpp"
#include "fale/oracle.hpp"

namespace testgen {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

// Columns: x1..xm numeric features, "a" categorical protected ("0"
// non-protected / "1" protected), "y" numeric 0/1 target.
inline fale::Dataset random_dataset(std::mt19937_64& rng, std::size_t rows,
                                    std::size_t num_features,
                                    double protected_fraction = 0.4) {
  std::vector<fale::FeatureSchema> schema;
  for (std::size_t i = 0; i < num_features; ++i) {
    fale::FeatureSchema f;
    f.name = "x" + std::to_string(i + 1);
    schema.push_back(f);
  }
  fale::FeatureSchema prot;
  prot.name = "a";
  prot.kind = fale::FeatureKind::kCategorical;
  prot.role = fale::FeatureRole::kProtected;
  prot.category_order = {"0", "1"};
  schema.push_back(prot);
  fale::FeatureSchema target;
  target.name = "y";
  target.role = fale::FeatureRole::kTarget;
  schema.push_back(target);

  std::vector<fale::Row> data;
  for (std::size_t r = 0; r < rows; ++r) {
    fale::Row row;
    for (std::size_t i = 0; i < num_features; ++i) {
      row.push_back(uniform(rng, -3.0, 3.0));
    }
    const bool is_protected = uniform(rng, 0.0, 1.0) < protected_fraction;
    // Guarantee both groups are represented.
    if (r == 0) {
      row.push_back(0.0);
    } else if (r == 1) {
      row.push_back(1.0);
    } else {
      row.push_back(is_protected ? 1.0 : 0.0);
    }
    row.push_back(uniform(rng, 0.0, 1.0) < 0.5 ? 0.0 : 1.0);
    data.push_back(std::move(row));
  }

  std::vector<std::vector<std::string>> categories(schema.size());
  categories[num_features] = {"0", "1"};
  return fale::Dataset(std::move(schema), std::move(categories),
                       std::move(data));
}

// Random logistic model over the dataset's model inputs (numeric features
// pass through unstandardized; the protected attribute gets one-hot
// weights, so scores can depend on group membership).
inline fale::BuiltinModel random_linear_model(std::mt19937_64& rng,
                                              const fale::Dataset& ds) {
  std::vector<fale::BuiltinModel::Feature> features;
  std::size_t width = 0;
  for (std::size_t col : ds.model_input_columns()) {
    fale::BuiltinModel::Feature f;
    f.name = ds.schema()[col].name;
    f.kind = ds.schema()[col].kind;
    if (f.kind == fale::FeatureKind::kCategorical) {
      f.categories = ds.categories(col);
      width += f.categories.size();
    } else {
      width += 1;
    }
    features.push_back(f);
  }
  std::vector<double> weights;
  for (std::size_t i = 0; i < width; ++i) {
    weights.push_back(uniform(rng, -2.0, 2.0));
  }
  return fale::BuiltinModel(std::move(features), std::move(weights),
                            uniform(rng, -1.0, 1.0));
}

}  // namespace testgen

#endif  // FALE_TESTS_SUPPORT_GENERATORS_HPP_
