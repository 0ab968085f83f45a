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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "fale/binning.hpp"
#include "fale/dataset.hpp"
#include "fale/error.hpp"
#include "fale/fairness.hpp"
#include "fale/fale.hpp"
#include "fale/plot.hpp"
#include "fale/report.hpp"
#include "fale/synth.hpp"
#include "json.hpp"
#include "support/generators.hpp"

using fale::AleCurve;
using fale::BarMode;
using fale::BinPartition;
using fale::FaleCurve;
using fale::MeasureId;
using fale::PlotSpec;
using fale::ProtectedSpec;
using fale::RunMeta;
using fale::SynthBundle;
using fale::SynthConfig;
using fale::UnfairnessMeasure;

namespace {

ProtectedSpec spec_a() {
  ProtectedSpec s;
  s.attribute = "a";
  s.protected_value = "1";
  s.non_protected_value = "0";
  return s;
}

// A real audit over synthetic data, so reports carry awkward decimals.
FaleCurve sample_curve(std::uint64_t seed, int bins = 5) {
  SynthConfig cfg;
  cfg.n_rows = 400;
  cfg.beta = 0.3;
  cfg.seed = seed;
  SynthBundle bundle = fale::generate(cfg);
  bundle.oracle->bind(bundle.dataset);
  const BinPartition p = fale::partition_column(
      bundle.dataset, bundle.dataset.column_index("x"),
      fale::BinStrategy::kQuantile, bins);
  return fale::fale_curve(
      bundle.dataset, *bundle.oracle,
      UnfairnessMeasure::make(MeasureId::kSignedStatisticalParity), p,
      spec_a());
}

AleCurve sample_ale(std::uint64_t seed) {
  SynthConfig cfg;
  cfg.n_rows = 300;
  cfg.seed = seed;
  SynthBundle bundle = fale::generate(cfg);
  bundle.oracle->bind(bundle.dataset);
  const BinPartition p = fale::partition_column(
      bundle.dataset, bundle.dataset.column_index("x"),
      fale::BinStrategy::kQuantile, 4);
  return fale::ale_curve(bundle.dataset, *bundle.oracle, p);
}

std::size_t count_occurrences(const std::string& text,
                              const std::string& needle) {
  std::size_t count = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

// Minimal tag-balance walk; enough to catch unclosed elements.
bool xml_balanced(const std::string& text) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '<') {
      ++i;
      continue;
    }
    const std::size_t end = text.find('>', i);
    if (end == std::string::npos) return false;
    std::string tag = text.substr(i + 1, end - i - 1);
    i = end + 1;
    if (tag.empty() || tag[0] == '?' || tag[0] == '!') continue;
    if (tag.back() == '/') continue;  // self-closing
    if (tag[0] == '/') {
      const std::string name = tag.substr(1);
      if (stack.empty() || stack.back() != name) return false;
      stack.pop_back();
      continue;
    }
    const std::size_t space = tag.find_first_of(" \t\n");
    stack.push_back(space == std::string::npos ? tag : tag.substr(0, space));
  }
  return stack.empty();
}

}  // namespace

TEST_CASE("audit report round-trips exactly") {
  const FaleCurve curve = sample_curve(41);
  RunMeta meta;
  meta.dataset_path = "data/example.csv";
  meta.dataset_fingerprint = "0011223344556677";
  meta.model = "builtin:model.json";
  meta.command_line = "fale audit --bins 5";
  meta.bin_strategy = "quantile";
  meta.centering = "weighted";
  meta.seed = 41;

  const std::string text = fale::write_report(curve, meta);
  const FaleCurve back = fale::read_report(text);
  CHECK(fale::curves_equal(curve, back));

  // Serialization is deterministic.
  CHECK(fale::write_report(back, meta) == text);

  const auto doc = nlohmann::json::parse(text);
  CHECK(doc.at("format") == "fale-report-v1");
  CHECK(doc.at("curve_type") == "fale");
  CHECK(doc.at("measure") == "signed-statistical-parity");
  CHECK(doc.at("protected").at("attribute") == "a");
  CHECK(doc.at("bins").size() == curve.per_bin.size());
  CHECK(doc.at("meta").at("seed") == 41);
  CHECK(text.back() == '\n');
}

TEST_CASE("ale report round-trips exactly") {
  const AleCurve curve = sample_ale(42);
  const std::string text = fale::write_ale_report(curve);
  const AleCurve back = fale::read_ale_report(text);
  CHECK(fale::curves_equal(curve, back));
  const auto doc = nlohmann::json::parse(text);
  CHECK(doc.at("curve_type") == "ale");
  CHECK(doc.at("meta").at("dataset_path") == nullptr);
}

TEST_CASE("unset meta fields serialize as null") {
  const FaleCurve curve = sample_curve(43);
  const auto doc = nlohmann::json::parse(fale::write_report(curve));
  CHECK(doc.at("meta").at("dataset_path") == nullptr);
  CHECK(doc.at("meta").at("model") == nullptr);
  CHECK(doc.at("meta").at("seed") == nullptr);
}

TEST_CASE("format and curve type tags are enforced") {
  const FaleCurve curve = sample_curve(44);
  const std::string text = fale::write_report(curve);

  CHECK_THROWS_AS(fale::read_report("not json"), fale::DataError);
  CHECK_THROWS_AS(fale::read_report("{}"), fale::DataError);

  auto doc = nlohmann::json::parse(text);
  doc["format"] = "fale-report-v2";
  CHECK_THROWS_AS(fale::read_report(doc.dump()), fale::DataError);

  // An audit report is not an effect report and vice versa.
  CHECK_THROWS_AS(fale::read_ale_report(text), fale::DataError);
  const std::string ale_text = fale::write_ale_report(sample_ale(44));
  CHECK_THROWS_AS(fale::read_report(ale_text), fale::DataError);
}

TEST_CASE("curve inequality is detected") {
  const FaleCurve a = sample_curve(45);
  FaleCurve b = a;
  CHECK(fale::curves_equal(a, b));
  b.per_bin[0].delta += 1e-15;
  CHECK_FALSE(fale::curves_equal(a, b));
  FaleCurve c = a;
  c.global_unfairness = -c.global_unfairness;
  CHECK_FALSE(fale::curves_equal(a, c));
}

TEST_CASE("save and load preserve bytes") {
  const std::string text = fale::write_report(sample_curve(46));
  const std::string path = "/tmp/fale_test_report.json";
  fale::save_text(path, text);
  CHECK(fale::load_text(path) == text);
  CHECK_THROWS_AS(fale::load_text("/tmp/fale_no_such_file.json"),
                  fale::DataError);
}

TEST_CASE("svg structure for an audit curve") {
  const FaleCurve curve = sample_curve(47, 6);
  const std::string svg = fale::render_svg(curve);

  CHECK(xml_balanced(svg));
  // One paired population bar per bin, and nothing else drawn as a rect.
  CHECK(count_occurrences(svg, "<rect") == 2 * curve.per_bin.size());
  CHECK(count_occurrences(svg, "<polyline") == 1);
  CHECK(count_occurrences(svg, "class=\"curve\"") == 1);

  // The y-axis label quotes the global unfairness to three decimals.
  char label[64];
  std::snprintf(label, sizeof(label), "(%.3f)", curve.global_unfairness);
  CHECK(svg.find(label) != std::string::npos);
  CHECK(svg.find("FALE") != std::string::npos);

  // The curve has one vertex per bin.
  const std::size_t points = svg.find("class=\"curve\"");
  const std::size_t start = svg.find("points=\"", points);
  const std::size_t stop = svg.find('"', start + 8);
  const std::string pts = svg.substr(start + 8, stop - start - 8);
  CHECK(count_occurrences(pts, ",") == curve.per_bin.size());

  // Rendering is deterministic byte for byte.
  CHECK(fale::render_svg(curve) == svg);
}

TEST_CASE("svg honors the requested geometry and labels") {
  const FaleCurve curve = sample_curve(48);
  PlotSpec spec;
  spec.width = 900;
  spec.height = 500;
  spec.y_label = "audit level";
  spec.title = "demo run";
  spec.bar_mode = BarMode::kProportions;
  const std::string svg = fale::render_svg(curve, spec);
  CHECK(svg.find("width=\"900\"") != std::string::npos);
  CHECK(svg.find("height=\"500\"") != std::string::npos);
  CHECK(svg.find("audit level (") != std::string::npos);
  CHECK(svg.find("demo run") != std::string::npos);

  PlotSpec bad;
  bad.width = 0;
  CHECK_THROWS_AS(fale::render_svg(curve, bad), fale::ConfigError);
}

TEST_CASE("svg structure for an effect curve") {
  const AleCurve curve = sample_ale(49);
  const std::string svg = fale::render_svg(curve);
  CHECK(xml_balanced(svg));
  // Effect plots draw one population bar per bin.
  CHECK(count_occurrences(svg, "<rect") == curve.bin_counts.size());
  CHECK(count_occurrences(svg, "<polyline") == 1);
  CHECK(svg.find("ALE") != std::string::npos);
  // No baseline parenthesis without a fairness measure.
  CHECK(svg.find("ALE (") == std::string::npos);
}

TEST_CASE("degenerate bins are marked") {
  FaleCurve curve = sample_curve(50);
  curve.per_bin[1].degenerate = true;
  const std::string svg = fale::render_svg(curve);
  CHECK(count_occurrences(svg, "class=\"degenerate\"") == 1);
}

TEST_CASE("empty curves are refused") {
  FaleCurve curve;
  CHECK_THROWS_AS(fale::render_svg(curve), fale::ConfigError);
}

TEST_CASE("report numbers survive hostile doubles") {
  FaleCurve curve = sample_curve(51);
  curve.per_bin[0].delta = 0.1 + 0.2;            // 0.30000000000000004
  curve.per_bin[0].u_low = 1.0 / 3.0;
  curve.per_bin[0].u_high = 1e-300;
  curve.center_offset = -0.0;
  const std::string text = fale::write_report(curve);
  const FaleCurve back = fale::read_report(text);
  CHECK(fale::curves_equal(curve, back));
}
