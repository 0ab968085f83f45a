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

// Typed tabular dataset. Columns are declared in a JSON schema sidecar
// (never inferred); rows are ingested from RFC-4180 CSV. Categorical cells
// are dictionary-encoded at load time: a cell holds either the numeric value
// or the category code as a double. Datasets are immutable once built and
// safe to read from any number of threads.

#ifndef FALE_DATASET_HPP_
#define FALE_DATASET_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace fale {

enum class FeatureKind { kNumeric, kCategorical };
enum class FeatureRole { kFeature, kProtected, kTarget, kIgnored };

const char* to_string(FeatureKind kind);
const char* to_string(FeatureRole role);

struct FeatureSchema {
  std::string name;
  FeatureKind kind = FeatureKind::kNumeric;
  FeatureRole role = FeatureRole::kFeature;
  // Optional, categorical only. When present it must cover every distinct
  // value of the column exactly once and fixes both the dictionary codes
  // and the default bin order.
  std::vector<std::string> category_order;
};

// One dataset row in encoded form: numeric value, or category code.
using Row = std::vector<double>;

class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<FeatureSchema> schema,
          std::vector<std::vector<std::string>> categories,
          std::vector<Row> rows);

  const std::vector<FeatureSchema>& schema() const { return schema_; }
  const std::vector<Row>& rows() const { return rows_; }
  std::size_t row_count() const { return rows_.size(); }
  std::size_t column_count() const { return schema_.size(); }

  // Index of a named column; DataError if absent.
  std::size_t column_index(const std::string& name) const;
  bool has_column(const std::string& name) const;

  double cell(std::size_t row, std::size_t col) const {
    return rows_[row][col];
  }

  // Resolved dictionary of a categorical column (user order when supplied,
  // otherwise observed labels sorted lexicographically).
  const std::vector<std::string>& categories(std::size_t col) const {
    return categories_[col];
  }

  // Display form of a cell: the label for categorical columns, the
  // shortest round-trip decimal for numeric ones.
  std::string cell_text(std::size_t row, std::size_t col) const;

  // Dictionary code of a label; -1 when the label is not in the column.
  std::int32_t code_of(std::size_t col, const std::string& label) const;

  // Columns a model consumes: everything except target and ignored roles,
  // in schema order.
  std::vector<std::size_t> model_input_columns() const;

  // FNV-1a content hash over schema and encoded rows; stable across runs.
  std::uint64_t fingerprint() const;
  std::string fingerprint_hex() const;

 private:
  std::vector<FeatureSchema> schema_;
  std::vector<std::vector<std::string>> categories_;
  std::vector<Row> rows_;
};

struct ProtectedSpec {
  std::string attribute;
  std::string protected_value;      // mapped to A=1
  std::string non_protected_value;  // mapped to A=0
};

// Row partition by protected-attribute value. Rows matching neither spec
// value are excluded from the audit and counted, not an error.
struct GroupSplit {
  std::vector<std::size_t> non_protected;  // A=0
  std::vector<std::size_t> protected_rows;  // A=1
  std::size_t excluded = 0;
};

// Schema sidecar: {"features":[{"name":..,"kind":..,"role":..,
// "category_order":[..]?}]}. Validates kinds/roles, name uniqueness and at
// most one protected/target entry.
std::vector<FeatureSchema> load_schema(const std::string& path);
std::vector<FeatureSchema> parse_schema(const std::string& json_text);
std::string schema_to_json(const std::vector<FeatureSchema>& schema);

// Ingest CSV with a header row. Header names must match the schema names as
// a set; column order is normalized to schema order. Parse failures name the
// offending row and column. Empty cells are rejected.
Dataset load_csv(const std::string& path,
                 const std::vector<FeatureSchema>& schema);
Dataset parse_csv(const std::string& text,
                  const std::vector<FeatureSchema>& schema,
                  const std::string& origin = "<memory>");

// RFC-4180 writer; load_csv(save_csv(ds)) reproduces ds exactly.
std::string to_csv(const Dataset& ds);
void save_csv(const Dataset& ds, const std::string& path);

GroupSplit split_by_protected(const Dataset& ds, const ProtectedSpec& spec);

}  // namespace fale

#endif  // FALE_DATASET_HPP_
