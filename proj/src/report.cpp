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

#include "fale/report.hpp"

#include <fstream>
#include <sstream>

#include "fale/error.hpp"
#include "fale/version.hpp"
#include "json.hpp"

namespace fale {
namespace {

using nlohmann::json;

constexpr const char* kFormatTag = "fale-report-v1";

json partition_to_json(const BinPartition& p) {
  json out;
  out["feature"] = p.feature;
  out["kind"] = to_string(p.kind);
  out["constant"] = p.constant;
  if (p.kind == FeatureKind::kNumeric) {
    out["boundaries"] = p.boundaries;
  } else {
    out["labels"] = p.labels;
    out["codes"] = p.codes;
  }
  return out;
}

FeatureKind kind_from_string(const std::string& s) {
  if (s == "numeric") return FeatureKind::kNumeric;
  if (s == "categorical") return FeatureKind::kCategorical;
  throw DataError("report: unknown feature kind '" + s + "'");
}

BinPartition partition_from_json(const json& j) {
  BinPartition p;
  p.feature = j.at("feature").get<std::string>();
  p.kind = kind_from_string(j.at("kind").get<std::string>());
  p.constant = j.at("constant").get<bool>();
  if (p.kind == FeatureKind::kNumeric) {
    p.boundaries = j.at("boundaries").get<std::vector<double>>();
  } else {
    p.labels = j.at("labels").get<std::vector<std::string>>();
    p.codes = j.at("codes").get<std::vector<std::int32_t>>();
  }
  return p;
}

json nullable(const std::string& s) {
  return s.empty() ? json() : json(s);
}

json meta_to_json(const RunMeta& meta) {
  json out;
  out["dataset_path"] = nullable(meta.dataset_path);
  out["dataset_fingerprint"] = nullable(meta.dataset_fingerprint);
  out["model"] = nullable(meta.model);
  out["command_line"] = nullable(meta.command_line);
  out["bin_strategy"] = nullable(meta.bin_strategy);
  out["centering"] = nullable(meta.centering);
  out["seed"] = meta.seed ? json(*meta.seed) : json();
  return out;
}

json parse_document(const std::string& text, const char* expected_type) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("report is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != kFormatTag) {
    throw DataError("report: missing or unsupported format tag");
  }
  if (doc.value("curve_type", "") != expected_type) {
    throw DataError("report: expected curve_type '" +
                    std::string(expected_type) + "'");
  }
  return doc;
}

}  // namespace

std::string write_report(const FaleCurve& curve, const RunMeta& meta) {
  json bins = json::array();
  for (const BinResult& b : curve.per_bin) {
    bins.push_back({{"index", b.index},
                    {"low", b.low},
                    {"high", b.high},
                    {"n0", b.n0},
                    {"n1", b.n1},
                    {"u_low", b.u_low},
                    {"u_high", b.u_high},
                    {"delta", b.delta},
                    {"accumulated", b.accumulated},
                    {"centered", b.centered},
                    {"degenerate", b.degenerate}});
  }
  json doc;
  doc["format"] = kFormatTag;
  doc["curve_type"] = "fale";
  doc["tool_version"] = kVersion;
  doc["feature"] = curve.feature;
  doc["measure"] = curve.measure.name();
  doc["protected"] = {
      {"attribute", curve.protected_spec.attribute},
      {"protected_value", curve.protected_spec.protected_value},
      {"non_protected_value", curve.protected_spec.non_protected_value}};
  doc["partition"] = partition_to_json(curve.partition);
  doc["bins"] = bins;
  doc["global_unfairness"] = curve.global_unfairness;
  doc["center_offset"] = curve.center_offset;
  doc["excluded_rows"] = curve.excluded_rows;
  doc["meta"] = meta_to_json(meta);
  return doc.dump(2) + "\n";
}

FaleCurve read_report(const std::string& json_text) {
  const json doc = parse_document(json_text, "fale");
  FaleCurve curve;
  try {
    curve.feature = doc.at("feature").get<std::string>();
    curve.measure = UnfairnessMeasure::parse(doc.at("measure").get<std::string>());
    const json& prot = doc.at("protected");
    curve.protected_spec.attribute = prot.at("attribute").get<std::string>();
    curve.protected_spec.protected_value =
        prot.at("protected_value").get<std::string>();
    curve.protected_spec.non_protected_value =
        prot.at("non_protected_value").get<std::string>();
    curve.partition = partition_from_json(doc.at("partition"));
    for (const json& jb : doc.at("bins")) {
      BinResult b;
      b.index = jb.at("index").get<std::size_t>();
      b.low = jb.at("low").get<double>();
      b.high = jb.at("high").get<double>();
      b.n0 = jb.at("n0").get<std::size_t>();
      b.n1 = jb.at("n1").get<std::size_t>();
      b.u_low = jb.at("u_low").get<double>();
      b.u_high = jb.at("u_high").get<double>();
      b.delta = jb.at("delta").get<double>();
      b.accumulated = jb.at("accumulated").get<double>();
      b.centered = jb.at("centered").get<double>();
      b.degenerate = jb.at("degenerate").get<bool>();
      curve.per_bin.push_back(b);
    }
    curve.global_unfairness = doc.at("global_unfairness").get<double>();
    curve.center_offset = doc.at("center_offset").get<double>();
    curve.excluded_rows = doc.at("excluded_rows").get<std::size_t>();
  } catch (const json::exception& e) {
    throw DataError(std::string("report: ") + e.what());
  }
  return curve;
}

std::string write_ale_report(const AleCurve& curve, const RunMeta& meta) {
  json doc;
  doc["format"] = kFormatTag;
  doc["curve_type"] = "ale";
  doc["tool_version"] = kVersion;
  doc["feature"] = curve.feature;
  doc["partition"] = partition_to_json(curve.partition);
  doc["bin_counts"] = curve.bin_counts;
  doc["uncentered"] = curve.uncentered;
  doc["centered"] = curve.centered;
  doc["center_offset"] = curve.center_offset;
  doc["empty_bins"] = json::array();
  for (bool e : curve.empty_bins) doc["empty_bins"].push_back(e);
  doc["meta"] = meta_to_json(meta);
  return doc.dump(2) + "\n";
}

AleCurve read_ale_report(const std::string& json_text) {
  const json doc = parse_document(json_text, "ale");
  AleCurve curve;
  try {
    curve.feature = doc.at("feature").get<std::string>();
    curve.partition = partition_from_json(doc.at("partition"));
    curve.bin_counts = doc.at("bin_counts").get<std::vector<std::size_t>>();
    curve.uncentered = doc.at("uncentered").get<std::vector<double>>();
    curve.centered = doc.at("centered").get<std::vector<double>>();
    curve.center_offset = doc.at("center_offset").get<double>();
    for (const json& e : doc.at("empty_bins")) {
      curve.empty_bins.push_back(e.get<bool>());
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("report: ") + e.what());
  }
  return curve;
}

bool curves_equal(const FaleCurve& a, const FaleCurve& b) {
  const auto partitions_equal = [](const BinPartition& x,
                                   const BinPartition& y) {
    return x.feature == y.feature && x.kind == y.kind &&
           x.boundaries == y.boundaries && x.labels == y.labels &&
           x.codes == y.codes && x.constant == y.constant;
  };
  if (a.feature != b.feature || !partitions_equal(a.partition, b.partition) ||
      a.protected_spec.attribute != b.protected_spec.attribute ||
      a.protected_spec.protected_value != b.protected_spec.protected_value ||
      a.protected_spec.non_protected_value !=
          b.protected_spec.non_protected_value ||
      a.measure.id != b.measure.id ||
      a.global_unfairness != b.global_unfairness ||
      a.center_offset != b.center_offset ||
      a.excluded_rows != b.excluded_rows ||
      a.per_bin.size() != b.per_bin.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.per_bin.size(); ++i) {
    const BinResult& x = a.per_bin[i];
    const BinResult& y = b.per_bin[i];
    if (x.index != y.index || x.low != y.low || x.high != y.high ||
        x.n0 != y.n0 || x.n1 != y.n1 || x.u_low != y.u_low ||
        x.u_high != y.u_high || x.delta != y.delta ||
        x.accumulated != y.accumulated || x.centered != y.centered ||
        x.degenerate != y.degenerate) {
      return false;
    }
  }
  return true;
}

bool curves_equal(const AleCurve& a, const AleCurve& b) {
  return a.feature == b.feature &&
         a.partition.boundaries == b.partition.boundaries &&
         a.partition.labels == b.partition.labels &&
         a.partition.kind == b.partition.kind &&
         a.bin_counts == b.bin_counts && a.uncentered == b.uncentered &&
         a.centered == b.centered && a.center_offset == b.center_offset &&
         a.empty_bins == b.empty_bins;
}

void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path);
  out << text;
  if (!out) throw DataError("write failed: " + path);
}

std::string load_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace fale
