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
#include <cmath>
#include <cstdlib>
#include <random>
#include <vector>

#include "doctest.h"
#include "fale/ale.hpp"
#include "fale/binning.hpp"
#include "fale/dataset.hpp"
#include "fale/error.hpp"
#include "fale/oracle.hpp"
#include "support/fn_oracle.hpp"
#include "support/generators.hpp"

using fale::AleCurve;
using fale::AleOptions;
using fale::BinPartition;
using fale::Centering;
using fale::Dataset;
using fale::FeatureKind;
using fale::FeatureSchema;
using fale::Row;
using testgen::FnOracle;

namespace {

Dataset one_column(std::vector<double> values) {
  FeatureSchema x;
  x.name = "x";
  std::vector<Row> rows;
  for (double v : values) rows.push_back({v});
  return Dataset({x}, {}, std::move(rows));
}

BinPartition numeric_bins(std::vector<double> boundaries) {
  BinPartition p;
  p.feature = "x";
  p.kind = FeatureKind::kNumeric;
  p.boundaries = std::move(boundaries);
  return p;
}

}  // namespace

TEST_CASE("doubling model over two unit bins") {
  const Dataset ds = one_column({0.5, 1.5});
  BinPartition p = numeric_bins({0.0, 1.0, 2.0});
  FnOracle f([](const Row& r) { return 2.0 * r[0]; });

  SUBCASE("per-bin local effects") {
    for (std::size_t k = 1; k <= 2; ++k) {
      const auto e = fale::bin_local_effect(ds, f, p, k);
      CHECK(e.count == 1);
      CHECK_FALSE(e.empty);
      CHECK(e.mean_effect == doctest::Approx(2.0).epsilon(1e-12));
    }
  }

  SUBCASE("accumulation and weighted centering") {
    const AleCurve curve = fale::ale_curve(ds, f, p);
    REQUIRE(curve.uncentered.size() == 2);
    CHECK(curve.uncentered[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(curve.uncentered[1] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(curve.center_offset == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(curve.centered[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(curve.centered[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(curve.bin_counts == std::vector<std::size_t>{1, 1});
  }

  SUBCASE("bin index validation") {
    CHECK_THROWS_AS(fale::bin_local_effect(ds, f, p, 0), fale::ConfigError);
    CHECK_THROWS_AS(fale::bin_local_effect(ds, f, p, 3), fale::ConfigError);
  }
}

TEST_CASE("constant model yields a null curve") {
  std::mt19937_64 rng(11);
  std::vector<double> values(200);
  for (double& v : values) v = testgen::uniform(rng, -5.0, 5.0);
  const Dataset ds = one_column(values);
  const BinPartition p = fale::quantile_partition(values, 7, "x");
  FnOracle f([](const Row&) { return 0.42; });

  const AleCurve curve = fale::ale_curve(ds, f, p);
  for (std::size_t i = 0; i < curve.centered.size(); ++i) {
    CHECK(std::abs(curve.uncentered[i]) <= 1e-12);
    CHECK(std::abs(curve.centered[i]) <= 1e-12);
  }
  CHECK(std::abs(curve.center_offset) <= 1e-12);
}

TEST_CASE("model ignoring the examined feature yields a null curve") {
  std::mt19937_64 rng(12);
  const Dataset ds = testgen::random_dataset(rng, 150, 2);
  const std::size_t x2 = ds.column_index("x2");
  std::vector<double> values;
  for (std::size_t r = 0; r < ds.row_count(); ++r) {
    values.push_back(ds.cell(r, x2));
  }
  BinPartition p = fale::quantile_partition(values, 5, "x2");
  // Rows carry every column in schema order; the score reads x1 only.
  FnOracle f([](const Row& r) { return 3.0 * r[0] - 1.0; });

  const AleCurve curve = fale::ale_curve(ds, f, p);
  for (double c : curve.centered) CHECK(std::abs(c) <= 1e-12);
}

TEST_CASE("single-bin curve centers to zero") {
  const Dataset ds = one_column({0.2, 0.4, 0.9});
  const BinPartition p = numeric_bins({0.0, 1.0});
  FnOracle f([](const Row& r) { return r[0] * r[0]; });

  const AleCurve curve = fale::ale_curve(ds, f, p);
  REQUIRE(curve.centered.size() == 1);
  CHECK(std::abs(curve.centered[0]) <= 1e-12);
}

TEST_CASE("empty bins are flagged and contribute nothing") {
  // No instance falls in (1,2].
  const Dataset ds = one_column({0.5, 0.7, 2.5});
  const BinPartition p = numeric_bins({0.0, 1.0, 2.0, 3.0});
  FnOracle f([](const Row& r) { return r[0]; });

  const auto mid = fale::bin_local_effect(ds, f, p, 2);
  CHECK(mid.empty);
  CHECK(mid.count == 0);
  CHECK(mid.mean_effect == 0.0);

  const AleCurve curve = fale::ale_curve(ds, f, p);
  CHECK(curve.empty_bins == std::vector<bool>{false, true, false});
  CHECK(curve.bin_counts == std::vector<std::size_t>{2, 0, 1});
  // Accumulation carries the previous value across the gap.
  CHECK(curve.uncentered[1] == doctest::Approx(curve.uncentered[0]));
}

TEST_CASE("all bins empty is an error") {
  const Dataset ds = one_column({0.5});
  const BinPartition p = numeric_bins({0.0, 1.0});
  FnOracle f([](const Row& r) { return r[0]; });
  AleOptions opts;
  const std::vector<std::size_t> none;
  opts.subset = &none;
  CHECK_THROWS_AS(fale::ale_curve(ds, f, p, opts), fale::DataError);
}

TEST_CASE("linear model recovery") {
  // For f(x) = w·x + b the accumulated estimate at boundary k is exactly
  // w_j * (boundary_k - boundary_0), independent of the other features.
  std::mt19937_64 rng(13);
  for (int iter = 0; iter < 10; ++iter) {
    const std::size_t rows = 40 + static_cast<std::size_t>(rng() % 160);
    const std::size_t nf = 1 + static_cast<std::size_t>(rng() % 3);
    const Dataset ds = testgen::random_dataset(rng, rows, nf);
    const std::size_t feature = static_cast<std::size_t>(rng() % nf);
    const std::string name = "x" + std::to_string(feature + 1);
    std::vector<double> values;
    for (std::size_t r = 0; r < ds.row_count(); ++r) {
      values.push_back(ds.cell(r, ds.column_index(name)));
    }
    const int k = 2 + static_cast<int>(rng() % 5);
    const BinPartition p = fale::quantile_partition(values, k, name);

    std::vector<double> w(nf + 1);
    for (double& v : w) v = testgen::uniform(rng, -2.0, 2.0);
    const double b = testgen::uniform(rng, -1.0, 1.0);
    FnOracle f([&w, b](const Row& r) {
      double z = b;
      for (std::size_t i = 0; i < w.size(); ++i) z += w[i] * r[i];
      return z;
    });

    const AleCurve curve = fale::ale_curve(ds, f, p);
    for (std::size_t i = 0; i < curve.uncentered.size(); ++i) {
      const double expected =
          w[feature] * (p.boundaries[i + 1] - p.boundaries[0]);
      CHECK(curve.uncentered[i] ==
            doctest::Approx(expected).epsilon(1e-9));
    }
  }
}

TEST_CASE("additivity in the oracle") {
  // ALE of f+g equals ALE of f plus ALE of g, bin by bin.
  std::mt19937_64 rng(14);
  const Dataset ds = testgen::random_dataset(rng, 120, 2);
  std::vector<double> values;
  for (std::size_t r = 0; r < ds.row_count(); ++r) {
    values.push_back(ds.cell(r, ds.column_index("x1")));
  }
  const BinPartition p = fale::quantile_partition(values, 4, "x1");

  FnOracle f([](const Row& r) { return std::sin(r[0]) + 0.3 * r[1]; });
  FnOracle g([](const Row& r) { return r[0] * r[0] - r[1]; });
  FnOracle fg([](const Row& r) {
    return std::sin(r[0]) + 0.3 * r[1] + r[0] * r[0] - r[1];
  });

  const AleCurve cf = fale::ale_curve(ds, f, p);
  const AleCurve cg = fale::ale_curve(ds, g, p);
  const AleCurve cs = fale::ale_curve(ds, fg, p);
  for (std::size_t i = 0; i < cs.uncentered.size(); ++i) {
    CHECK(cs.uncentered[i] ==
          doctest::Approx(cf.uncentered[i] + cg.uncentered[i])
              .epsilon(1e-9));
    CHECK(cs.centered[i] ==
          doctest::Approx(cf.centered[i] + cg.centered[i]).epsilon(1e-9));
  }
}

TEST_CASE("weighted centering zeroes the population mean") {
  std::mt19937_64 rng(15);
  for (int iter = 0; iter < 20; ++iter) {
    const std::size_t rows = 30 + static_cast<std::size_t>(rng() % 100);
    const Dataset ds = testgen::random_dataset(rng, rows, 1);
    std::vector<double> values;
    for (std::size_t r = 0; r < ds.row_count(); ++r) {
      values.push_back(ds.cell(r, ds.column_index("x1")));
    }
    const BinPartition p =
        fale::quantile_partition(values, 2 + static_cast<int>(rng() % 6),
                                 "x1");
    FnOracle f([](const Row& r) { return std::tanh(r[0]) + 0.1 * r[0]; });

    const AleCurve curve = fale::ale_curve(ds, f, p);
    double mean = 0.0;
    for (std::size_t i = 0; i < curve.centered.size(); ++i) {
      mean += static_cast<double>(curve.bin_counts[i]) /
              static_cast<double>(ds.row_count()) * curve.centered[i];
    }
    CHECK(std::abs(mean) <= 1e-12);
  }
}

TEST_CASE("unweighted centering zeroes the simple mean") {
  std::mt19937_64 rng(16);
  const Dataset ds = testgen::random_dataset(rng, 90, 1);
  std::vector<double> values;
  for (std::size_t r = 0; r < ds.row_count(); ++r) {
    values.push_back(ds.cell(r, ds.column_index("x1")));
  }
  const BinPartition p = fale::quantile_partition(values, 5, "x1");
  FnOracle f([](const Row& r) { return std::exp(0.3 * r[0]); });

  AleOptions opts;
  opts.centering = Centering::kUnweighted;
  const AleCurve curve = fale::ale_curve(ds, f, p, opts);
  double mean = 0.0;
  for (double c : curve.centered) mean += c;
  mean /= static_cast<double>(curve.centered.size());
  CHECK(std::abs(mean) <= 1e-12);

  // The two conventions agree only when bins are equally populated, so on
  // a quantile partition of distinct values they usually match closely but
  // the offsets differ once counts are uneven.
  const AleCurve weighted = fale::ale_curve(ds, f, p);
  CHECK(weighted.uncentered == curve.uncentered);
}

TEST_CASE("builtin model in raw mode matches its linear form") {
  std::mt19937_64 rng(17);
  const Dataset ds = testgen::random_dataset(rng, 100, 2);
  fale::BuiltinModel model = testgen::random_linear_model(rng, ds);
  model.set_output_mode(fale::BuiltinModel::OutputMode::kRaw);
  model.bind(ds);

  // In raw mode the score is affine in the standardized numeric inputs, so
  // the accumulated estimate must follow the effective slope exactly.
  std::vector<double> values;
  for (std::size_t r = 0; r < ds.row_count(); ++r) {
    values.push_back(ds.cell(r, ds.column_index("x1")));
  }
  const BinPartition p = fale::quantile_partition(values, 4, "x1");
  const AleCurve curve = fale::ale_curve(ds, model, p);

  // Probe the effective slope through the oracle interface itself.
  Row probe = ds.rows()[0];
  const std::size_t col = ds.column_index("x1");
  Row probe_shift = probe;
  probe_shift[col] += 1.0;
  const auto scores = model.predict_batch({probe, probe_shift});
  const double slope = scores[1] - scores[0];

  for (std::size_t i = 0; i < curve.uncentered.size(); ++i) {
    const double expected = slope * (p.boundaries[i + 1] - p.boundaries[0]);
    CHECK(curve.uncentered[i] == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("subset restriction audits only the chosen rows") {
  const Dataset ds = one_column({0.5, 1.5, 0.6, 1.6});
  const BinPartition p = numeric_bins({0.0, 1.0, 2.0});
  FnOracle f([](const Row& r) { return r[0] < 1.0 ? 10.0 * r[0] : r[0]; });

  AleOptions opts;
  const std::vector<std::size_t> first_two{0, 1};
  opts.subset = &first_two;
  const AleCurve curve = fale::ale_curve(ds, f, p, opts);
  CHECK(curve.bin_counts == std::vector<std::size_t>{1, 1});

  const AleCurve full = fale::ale_curve(ds, f, p);
  CHECK(full.bin_counts == std::vector<std::size_t>{2, 2});
}

TEST_CASE("parallel evaluation matches sequential") {
  std::mt19937_64 rng(18);
  const Dataset ds = testgen::random_dataset(rng, 300, 2);
  std::vector<double> values;
  for (std::size_t r = 0; r < ds.row_count(); ++r) {
    values.push_back(ds.cell(r, ds.column_index("x1")));
  }
  const BinPartition p = fale::quantile_partition(values, 8, "x1");
  FnOracle f([](const Row& r) { return std::cos(r[0]) * r[1]; });

  const AleCurve seq = fale::ale_curve(ds, f, p);
  AleOptions opts;
  opts.jobs = 4;
  const AleCurve par = fale::ale_curve(ds, f, p, opts);
  CHECK(seq.uncentered == par.uncentered);
  CHECK(seq.centered == par.centered);
  CHECK(seq.center_offset == par.center_offset);
}
