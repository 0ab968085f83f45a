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

#include "fale/dataset.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

#include "fale/error.hpp"

namespace fale {
namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Shortest decimal that reparses to the same double.
std::string double_text(double v) { return json(v).dump(); }

struct CsvField {
  std::string text;
  bool quoted = false;
};

using CsvRecord = std::vector<CsvField>;

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// RFC-4180 tokenizer. Accepts LF or CRLF record separators and quoted
// fields with doubled quotes; a quote inside an unquoted field or trailing
// text after a closing quote is an error.
std::vector<CsvRecord> tokenize_csv(const std::string& text,
                                    const std::string& origin) {
  std::vector<CsvRecord> records;
  CsvRecord record;
  CsvField field;
  enum State { kStart, kUnquoted, kQuoted, kQuoteInQuoted } state = kStart;
  std::size_t line = 1;

  auto fail = [&](const std::string& what) {
    throw DataError(origin + ": line " + std::to_string(line) + ": " + what);
  };
  auto end_field = [&] {
    record.push_back(std::move(field));
    field = CsvField{};
    state = kStart;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '\r') {
      // Only meaningful before '\n'; otherwise keep it (trim handles tails).
      if (state != kQuoted && i + 1 < text.size() && text[i + 1] == '\n') {
        continue;
      }
      if (state == kStart) state = kUnquoted;
      field.text += c;
      continue;
    }
    switch (state) {
      case kStart:
        if (c == '"') {
          field.quoted = true;
          state = kQuoted;
        } else if (c == ',') {
          end_field();
        } else if (c == '\n') {
          end_record();
          ++line;
        } else {
          field.text += c;
          state = kUnquoted;
        }
        break;
      case kUnquoted:
        if (c == ',') {
          end_field();
        } else if (c == '\n') {
          end_record();
          ++line;
        } else if (c == '"') {
          fail("bare quote inside unquoted field");
        } else {
          field.text += c;
        }
        break;
      case kQuoted:
        if (c == '"') {
          state = kQuoteInQuoted;
        } else {
          if (c == '\n') ++line;
          field.text += c;
        }
        break;
      case kQuoteInQuoted:
        if (c == '"') {
          field.text += '"';
          state = kQuoted;
        } else if (c == ',') {
          end_field();
        } else if (c == '\n') {
          end_record();
          ++line;
        } else {
          fail("unexpected character after closing quote");
        }
        break;
    }
  }
  if (state == kQuoted) fail("unterminated quoted field");
  if (state != kStart || !record.empty()) end_record();
  // A trailing newline produces one empty single-field record; drop it.
  if (!records.empty() && records.back().size() == 1 &&
      !records.back()[0].quoted && records.back()[0].text.empty()) {
    records.pop_back();
  }
  return records;
}

bool needs_quoting(const std::string& s) {
  return s.find_first_of(",\"\n\r") != std::string::npos ||
         (!s.empty() && (s.front() == ' ' || s.back() == ' '));
}

std::string csv_escape(const std::string& s) {
  if (!needs_quoting(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    out += c;
  }
  out += '"';
  return out;
}

double parse_numeric_cell(const std::string& raw, std::size_t data_row,
                          const std::string& column) {
  const std::string t = trim(raw);
  auto fail = [&](const std::string& what) {
    throw DataError("data row " + std::to_string(data_row) + ", column '" +
                    column + "': " + what + " ('" + raw + "')");
  };
  if (t.empty()) fail("missing value in numeric column");
  double value = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) fail("unparseable numeric cell");
  if (!std::isfinite(value)) fail("non-finite numeric cell");
  return value;
}

FeatureKind parse_kind(const std::string& s) {
  if (s == "numeric") return FeatureKind::kNumeric;
  if (s == "categorical") return FeatureKind::kCategorical;
  throw DataError("schema: unknown kind '" + s + "'");
}

FeatureRole parse_role(const std::string& s) {
  if (s == "feature") return FeatureRole::kFeature;
  if (s == "protected") return FeatureRole::kProtected;
  if (s == "target") return FeatureRole::kTarget;
  if (s == "ignored") return FeatureRole::kIgnored;
  throw DataError("schema: unknown role '" + s + "'");
}

}  // namespace

const char* to_string(FeatureKind kind) {
  return kind == FeatureKind::kNumeric ? "numeric" : "categorical";
}

const char* to_string(FeatureRole role) {
  switch (role) {
    case FeatureRole::kFeature:
      return "feature";
    case FeatureRole::kProtected:
      return "protected";
    case FeatureRole::kTarget:
      return "target";
    default:
      return "ignored";
  }
}

Dataset::Dataset(std::vector<FeatureSchema> schema,
                 std::vector<std::vector<std::string>> categories,
                 std::vector<Row> rows)
    : schema_(std::move(schema)),
      categories_(std::move(categories)),
      rows_(std::move(rows)) {
  categories_.resize(schema_.size());
  for (const Row& row : rows_) {
    if (row.size() != schema_.size()) {
      throw DataError("row arity does not match schema arity");
    }
  }
}

std::size_t Dataset::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < schema_.size(); ++i) {
    if (schema_[i].name == name) return i;
  }
  throw DataError("no such column: '" + name + "'");
}

bool Dataset::has_column(const std::string& name) const {
  for (const auto& f : schema_) {
    if (f.name == name) return true;
  }
  return false;
}

std::string Dataset::cell_text(std::size_t row, std::size_t col) const {
  if (schema_[col].kind == FeatureKind::kCategorical) {
    const auto code = static_cast<std::size_t>(rows_[row][col]);
    return categories_[col][code];
  }
  return double_text(rows_[row][col]);
}

std::int32_t Dataset::code_of(std::size_t col,
                              const std::string& label) const {
  const auto& cats = categories_[col];
  for (std::size_t i = 0; i < cats.size(); ++i) {
    if (cats[i] == label) return static_cast<std::int32_t>(i);
  }
  return -1;
}

std::vector<std::size_t> Dataset::model_input_columns() const {
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < schema_.size(); ++i) {
    if (schema_[i].role == FeatureRole::kTarget ||
        schema_[i].role == FeatureRole::kIgnored) {
      continue;
    }
    cols.push_back(i);
  }
  return cols;
}

std::uint64_t Dataset::fingerprint() const {
  constexpr std::uint64_t kOffset = 1469598103934665603ull;
  constexpr std::uint64_t kPrime = 1099511628211ull;
  std::uint64_t h = kOffset;
  auto mix_byte = [&](unsigned char b) {
    h ^= b;
    h *= kPrime;
  };
  auto mix_string = [&](const std::string& s) {
    for (char c : s) mix_byte(static_cast<unsigned char>(c));
    mix_byte(0xFF);
  };
  auto mix_u64 = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) mix_byte((v >> (8 * i)) & 0xFF);
  };
  for (std::size_t c = 0; c < schema_.size(); ++c) {
    mix_string(schema_[c].name);
    mix_byte(static_cast<unsigned char>(schema_[c].kind));
    mix_byte(static_cast<unsigned char>(schema_[c].role));
    for (const auto& label : categories_[c]) mix_string(label);
  }
  for (const Row& row : rows_) {
    for (double v : row) mix_u64(std::bit_cast<std::uint64_t>(v));
  }
  return h;
}

std::string Dataset::fingerprint_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fingerprint()));
  return buf;
}

std::vector<FeatureSchema> parse_schema(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw DataError(std::string("schema: invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("features") ||
      !doc["features"].is_array()) {
    throw DataError("schema: expected object with a 'features' array");
  }
  std::vector<FeatureSchema> schema;
  std::set<std::string> seen;
  int protected_count = 0;
  int target_count = 0;
  for (const auto& entry : doc["features"]) {
    FeatureSchema f;
    if (!entry.contains("name") || !entry["name"].is_string()) {
      throw DataError("schema: feature entry without a string 'name'");
    }
    f.name = entry["name"].get<std::string>();
    if (!seen.insert(f.name).second) {
      throw DataError("schema: duplicate feature name '" + f.name + "'");
    }
    f.kind = parse_kind(entry.value("kind", std::string("numeric")));
    f.role = parse_role(entry.value("role", std::string("feature")));
    if (entry.contains("category_order")) {
      if (f.kind != FeatureKind::kCategorical) {
        throw DataError("schema: category_order on numeric column '" +
                        f.name + "'");
      }
      std::set<std::string> labels;
      for (const auto& v : entry["category_order"]) {
        if (!v.is_string()) {
          throw DataError("schema: category_order entries must be strings");
        }
        f.category_order.push_back(v.get<std::string>());
        if (!labels.insert(f.category_order.back()).second) {
          throw DataError("schema: duplicate label in category_order of '" +
                          f.name + "'");
        }
      }
    }
    if (f.role == FeatureRole::kProtected) ++protected_count;
    if (f.role == FeatureRole::kTarget) ++target_count;
    schema.push_back(std::move(f));
  }
  if (protected_count > 1) {
    throw DataError("schema: more than one protected column");
  }
  if (target_count > 1) throw DataError("schema: more than one target column");
  return schema;
}

std::vector<FeatureSchema> load_schema(const std::string& path) {
  return parse_schema(read_file(path));
}

std::string schema_to_json(const std::vector<FeatureSchema>& schema) {
  json features = json::array();
  for (const auto& f : schema) {
    json entry = {{"name", f.name},
                  {"kind", to_string(f.kind)},
                  {"role", to_string(f.role)}};
    if (!f.category_order.empty()) entry["category_order"] = f.category_order;
    features.push_back(std::move(entry));
  }
  return json{{"features", features}}.dump(2) + "\n";
}

Dataset parse_csv(const std::string& text,
                  const std::vector<FeatureSchema>& schema,
                  const std::string& origin) {
  if (schema.empty()) throw DataError("empty schema");
  std::vector<CsvRecord> records = tokenize_csv(text, origin);
  if (records.empty()) throw DataError(origin + ": missing header row");

  // Header names must equal the schema names as a set; remember where each
  // schema column lives in the file.
  const CsvRecord& header = records[0];
  std::unordered_map<std::string, std::size_t> header_pos;
  for (std::size_t i = 0; i < header.size(); ++i) {
    std::string name = header[i].quoted ? header[i].text : trim(header[i].text);
    if (!header_pos.emplace(name, i).second) {
      throw DataError(origin + ": duplicate header column '" + name + "'");
    }
  }
  if (header_pos.size() != schema.size()) {
    for (const auto& f : schema) {
      if (header_pos.find(f.name) == header_pos.end()) {
        throw DataError(origin + ": missing column '" + f.name + "'");
      }
    }
    throw DataError(origin + ": header has columns not present in schema");
  }
  std::vector<std::size_t> source_col(schema.size());
  for (std::size_t c = 0; c < schema.size(); ++c) {
    auto it = header_pos.find(schema[c].name);
    if (it == header_pos.end()) {
      throw DataError(origin + ": missing column '" + schema[c].name + "'");
    }
    source_col[c] = it->second;
  }

  const std::size_t n_rows = records.size() - 1;
  std::vector<std::vector<std::string>> raw(schema.size());
  for (std::size_t r = 1; r < records.size(); ++r) {
    const CsvRecord& rec = records[r];
    if (rec.size() != header.size()) {
      throw DataError(origin + ": data row " + std::to_string(r) + " has " +
                      std::to_string(rec.size()) + " fields, expected " +
                      std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < schema.size(); ++c) {
      const CsvField& f = rec[source_col[c]];
      raw[c].push_back(f.quoted ? f.text : trim(f.text));
    }
  }

  // Resolve categorical dictionaries: the declared order when present,
  // otherwise the observed labels sorted lexicographically (deterministic
  // and independent of row order).
  std::vector<std::vector<std::string>> categories(schema.size());
  std::vector<std::unordered_map<std::string, std::int32_t>> code(
      schema.size());
  for (std::size_t c = 0; c < schema.size(); ++c) {
    if (schema[c].kind != FeatureKind::kCategorical) continue;
    if (!schema[c].category_order.empty()) {
      categories[c] = schema[c].category_order;
    } else {
      std::set<std::string> observed(raw[c].begin(), raw[c].end());
      categories[c].assign(observed.begin(), observed.end());
    }
    for (std::size_t i = 0; i < categories[c].size(); ++i) {
      code[c][categories[c][i]] = static_cast<std::int32_t>(i);
    }
  }

  std::vector<Row> rows(n_rows, Row(schema.size(), 0.0));
  for (std::size_t r = 0; r < n_rows; ++r) {
    for (std::size_t c = 0; c < schema.size(); ++c) {
      const std::string& cell = raw[c][r];
      if (schema[c].kind == FeatureKind::kNumeric) {
        rows[r][c] = parse_numeric_cell(cell, r + 1, schema[c].name);
      } else {
        if (cell.empty()) {
          throw DataError("data row " + std::to_string(r + 1) + ", column '" +
                          schema[c].name +
                          "': missing value in categorical column");
        }
        auto it = code[c].find(cell);
        if (it == code[c].end()) {
          throw DataError("data row " + std::to_string(r + 1) + ", column '" +
                          schema[c].name + "': unknown categorical label '" +
                          cell + "'");
        }
        rows[r][c] = static_cast<double>(it->second);
      }
    }
  }
  return Dataset(schema, std::move(categories), std::move(rows));
}

Dataset load_csv(const std::string& path,
                 const std::vector<FeatureSchema>& schema) {
  return parse_csv(read_file(path), schema, path);
}

std::string to_csv(const Dataset& ds) {
  std::string out;
  const auto& schema = ds.schema();
  for (std::size_t c = 0; c < schema.size(); ++c) {
    if (c > 0) out += ',';
    out += csv_escape(schema[c].name);
  }
  out += '\n';
  for (std::size_t r = 0; r < ds.row_count(); ++r) {
    for (std::size_t c = 0; c < schema.size(); ++c) {
      if (c > 0) out += ',';
      out += csv_escape(ds.cell_text(r, c));
    }
    out += '\n';
  }
  return out;
}

void save_csv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << to_csv(ds);
  if (!out) throw DataError("write failed: " + path);
}

GroupSplit split_by_protected(const Dataset& ds, const ProtectedSpec& spec) {
  const std::size_t col = ds.column_index(spec.attribute);
  if (ds.schema()[col].role != FeatureRole::kProtected) {
    throw ConfigError("column '" + spec.attribute +
                      "' does not have role=protected");
  }
  if (spec.protected_value == spec.non_protected_value) {
    throw ConfigError("protected and non-protected values are identical: '" +
                      spec.protected_value + "'");
  }

  double val0 = 0.0;
  double val1 = 0.0;
  if (ds.schema()[col].kind == FeatureKind::kCategorical) {
    val1 = static_cast<double>(ds.code_of(col, spec.protected_value));
    val0 = static_cast<double>(ds.code_of(col, spec.non_protected_value));
  } else {
    try {
      val1 = parse_numeric_cell(spec.protected_value, 0, spec.attribute);
      val0 = parse_numeric_cell(spec.non_protected_value, 0, spec.attribute);
    } catch (const DataError&) {
      throw ConfigError("protected spec values for numeric column '" +
                        spec.attribute + "' must be numeric literals");
    }
  }

  GroupSplit split;
  for (std::size_t r = 0; r < ds.row_count(); ++r) {
    const double v = ds.cell(r, col);
    if (v == val0) {
      split.non_protected.push_back(r);
    } else if (v == val1) {
      split.protected_rows.push_back(r);
    } else {
      ++split.excluded;
    }
  }
  if (split.non_protected.empty()) {
    throw DataError("non-protected group empty for " + spec.attribute + "=" +
                    spec.non_protected_value);
  }
  if (split.protected_rows.empty()) {
    throw DataError("protected group empty for " + spec.attribute + "=" +
                    spec.protected_value);
  }
  return split;
}

}  // namespace fale
