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

// fale: model-agnostic fairness auditing at the command line.
//
//   fale audit --data d.csv --schema s.json --model builtin:m.json
//       --protected sex=Female/Male --feature age --out-svg age.svg
//   fale ale ... | fale train ... | fale synth ...
//
// Exit codes: 0 ok, 2 configuration error, 3 data error, 4 oracle error.
// Failures print a single `error: ...` line to standard error.

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fale/ale.hpp"
#include "fale/binning.hpp"
#include "fale/dataset.hpp"
#include "fale/error.hpp"
#include "fale/fale.hpp"
#include "fale/fairness.hpp"
#include "fale/log.hpp"
#include "fale/oracle.hpp"
#include "fale/plot.hpp"
#include "fale/report.hpp"
#include "fale/synth.hpp"
#include "fale/version.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

// Shortest round-trip decimal; byte-identical to the report serialization.
std::string real_text(double v) { return json(v).dump(); }

fale::ProtectedSpec parse_protected(const std::string& s) {
  const auto eq = s.find('=');
  const auto slash = s.find('/', eq == std::string::npos ? 0 : eq + 1);
  if (eq == std::string::npos || slash == std::string::npos) {
    throw fale::ConfigError(
        "--protected must look like ATTR=PROTECTED/NONPROTECTED");
  }
  fale::ProtectedSpec spec;
  spec.attribute = s.substr(0, eq);
  spec.protected_value = s.substr(eq + 1, slash - eq - 1);
  spec.non_protected_value = s.substr(slash + 1);
  if (spec.attribute.empty() || spec.protected_value.empty() ||
      spec.non_protected_value.empty()) {
    throw fale::ConfigError(
        "--protected must look like ATTR=PROTECTED/NONPROTECTED");
  }
  return spec;
}

std::vector<std::string> split_command(const std::string& s) {
  std::istringstream ss(s);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

std::shared_ptr<fale::PredictionOracle> make_oracle(const std::string& model) {
  const std::string builtin_prefix = "builtin:";
  const std::string exec_prefix = "exec:";
  if (model.rfind(builtin_prefix, 0) == 0) {
    const std::string path = model.substr(builtin_prefix.size());
    return std::make_shared<fale::BuiltinModel>(fale::BuiltinModel::load(path));
  }
  if (model.rfind(exec_prefix, 0) == 0) {
    const auto cmd = split_command(model.substr(exec_prefix.size()));
    if (cmd.empty()) throw fale::ConfigError("exec: command is empty");
    return std::shared_ptr<fale::PredictionOracle>(fale::spawn_external(cmd));
  }
  throw fale::ConfigError("--model must be builtin:PATH or exec:COMMAND");
}

fale::BinStrategy parse_strategy(const std::string& s) {
  if (s == "quantile") return fale::BinStrategy::kQuantile;
  if (s == "fixed-width" || s == "fixed_width" || s == "fixed") {
    return fale::BinStrategy::kFixedWidth;
  }
  throw fale::ConfigError("--bin-strategy must be quantile or fixed-width");
}

std::optional<std::vector<std::string>> parse_category_order(
    const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, ',')) out.push_back(item);
  if (out.empty()) throw fale::ConfigError("--category-order is empty");
  return out;
}

fale::Centering parse_centering(const std::string& s) {
  if (s == "weighted") return fale::Centering::kWeighted;
  if (s == "unweighted") return fale::Centering::kUnweighted;
  throw fale::ConfigError("--centering must be weighted or unweighted");
}

fale::BarMode parse_bar_mode(const std::string& s) {
  if (s == "counts") return fale::BarMode::kCounts;
  if (s == "proportions") return fale::BarMode::kProportions;
  throw fale::ConfigError("--bar-mode must be counts or proportions");
}

std::string join_args(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i) out += ' ';
    out += argv[i];
  }
  return out;
}

// Flags shared by audit and ale.
struct CommonFlags {
  std::string data;
  std::string schema;
  std::string model;
  std::string feature;
  int bins = 10;
  std::string bin_strategy = "quantile";
  std::string category_order;
  std::string centering = "weighted";
  std::string bar_mode = "counts";
  double hard_labels = -1.0;  // < 0: disabled
  int jobs = 1;
  std::string out_svg;
  std::string out_json;
  std::uint64_t seed = 0;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f, const char* svg_default,
                      const char* json_default) {
  cmd->add_option("--data", f.data, "CSV data file")->required();
  cmd->add_option("--schema", f.schema, "JSON schema sidecar")->required();
  cmd->add_option("--model", f.model,
                  "Model source: builtin:PATH or exec:COMMAND")
      ->required();
  cmd->add_option("--feature", f.feature, "Feature to examine")->required();
  cmd->add_option("--bins", f.bins, "Bin count for numeric features");
  cmd->add_option("--bin-strategy", f.bin_strategy,
                  "quantile or fixed-width");
  cmd->add_option("--category-order", f.category_order,
                  "Comma-separated bin order for a categorical feature");
  cmd->add_option("--centering", f.centering, "weighted or unweighted");
  cmd->add_option("--bar-mode", f.bar_mode, "counts or proportions");
  cmd->add_option("--hard-labels", f.hard_labels,
                  "Threshold scores into 0/1 labels at T");
  cmd->add_option("--jobs", f.jobs, "Worker cap for bin-parallel scoring");
  f.out_svg = svg_default;
  f.out_json = json_default;
  cmd->add_option("--out-svg", f.out_svg, "SVG output path");
  cmd->add_option("--out-json", f.out_json, "JSON report output path");
  cmd->add_option("--seed", f.seed, "Seed echoed into the report");
}

struct LoadedRun {
  fale::Dataset dataset;
  std::shared_ptr<fale::PredictionOracle> oracle;
  fale::RunMeta meta;
};

LoadedRun load_run(const CommonFlags& f, const std::string& command_line) {
  if (f.out_svg == f.out_json) {
    throw fale::ConfigError("--out-svg and --out-json must differ");
  }
  if (f.jobs < 1) throw fale::ConfigError("--jobs must be >= 1");
  LoadedRun run;
  run.dataset = fale::load_csv(f.data, fale::load_schema(f.schema));
  run.oracle = make_oracle(f.model);
  if (f.hard_labels >= 0.0) {
    run.oracle =
        std::make_shared<fale::ThresholdOracle>(run.oracle, f.hard_labels);
  }
  run.oracle->bind(run.dataset);
  run.meta.dataset_path = f.data;
  run.meta.dataset_fingerprint = run.dataset.fingerprint_hex();
  run.meta.model = f.model;
  run.meta.command_line = command_line;
  run.meta.bin_strategy = f.bin_strategy;
  run.meta.centering = f.centering;
  run.meta.seed = f.seed;
  return run;
}

fale::PlotSpec plot_spec_for(const CommonFlags& f) {
  fale::PlotSpec spec;
  spec.bar_mode = parse_bar_mode(f.bar_mode);
  return spec;
}

int cmd_audit(const CommonFlags& f, const std::string& protected_flag,
              const std::string& fairness, const std::string& command_line) {
  const fale::ProtectedSpec spec = parse_protected(protected_flag);
  const fale::UnfairnessMeasure measure = fale::UnfairnessMeasure::parse(fairness);
  LoadedRun run = load_run(f, command_line);

  const fale::GroupSplit split = fale::split_by_protected(run.dataset, spec);
  std::vector<std::size_t> retained = split.non_protected;
  retained.insert(retained.end(), split.protected_rows.begin(),
                  split.protected_rows.end());
  std::sort(retained.begin(), retained.end());

  const fale::BinPartition partition = fale::partition_column(
      run.dataset, run.dataset.column_index(f.feature),
      parse_strategy(f.bin_strategy), f.bins, &retained,
      parse_category_order(f.category_order));

  fale::FaleOptions options;
  options.centering = parse_centering(f.centering);
  options.jobs = f.jobs;
  const fale::FaleCurve curve = fale::fale_curve(
      run.dataset, *run.oracle, measure, partition, spec, options);

  fale::save_text(f.out_json, fale::write_report(curve, run.meta));
  fale::save_text(f.out_svg, fale::render_svg(curve, plot_spec_for(f)));

  std::cout << "global_unfairness " << real_text(curve.global_unfairness)
            << "\n";
  std::vector<std::size_t> order(curve.per_bin.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                   std::size_t b) {
    return std::abs(curve.per_bin[a].centered) >
           std::abs(curve.per_bin[b].centered);
  });
  const std::size_t top = std::min<std::size_t>(3, order.size());
  for (std::size_t i = 0; i < top; ++i) {
    const fale::BinResult& bin = curve.per_bin[order[i]];
    std::cout << "bin " << bin.index << " centered "
              << real_text(bin.centered) << " low " << real_text(bin.low)
              << " high " << real_text(bin.high) << " n0 " << bin.n0
              << " n1 " << bin.n1 << (bin.degenerate ? " degenerate" : "")
              << "\n";
  }
  return fale::kExitOk;
}

int cmd_ale(const CommonFlags& f, const std::string& command_line) {
  LoadedRun run = load_run(f, command_line);
  const fale::BinPartition partition = fale::partition_column(
      run.dataset, run.dataset.column_index(f.feature),
      parse_strategy(f.bin_strategy), f.bins, nullptr,
      parse_category_order(f.category_order));

  fale::AleOptions options;
  options.centering = parse_centering(f.centering);
  options.jobs = f.jobs;
  const fale::AleCurve curve =
      fale::ale_curve(run.dataset, *run.oracle, partition, options);

  fale::save_text(f.out_json, fale::write_ale_report(curve, run.meta));
  fale::save_text(f.out_svg, fale::render_svg(curve, plot_spec_for(f)));

  std::cout << "center_offset " << real_text(curve.center_offset) << "\n";
  std::vector<std::size_t> order(curve.centered.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                   std::size_t b) {
    return std::abs(curve.centered[a]) > std::abs(curve.centered[b]);
  });
  const std::size_t top = std::min<std::size_t>(3, order.size());
  for (std::size_t i = 0; i < top; ++i) {
    const std::size_t k = order[i];
    std::cout << "bin " << k + 1 << " centered "
              << real_text(curve.centered[k]) << " count "
              << curve.bin_counts[k] << "\n";
  }
  return fale::kExitOk;
}

struct TrainFlags {
  std::string data;
  std::string schema;
  std::string target;
  std::string out = "model.json";
  double learning_rate = 0.1;
  int epochs = 500;
  double l2 = 1e-4;
  std::uint64_t seed = 0;
};

int cmd_train(const TrainFlags& f) {
  const fale::Dataset ds = fale::load_csv(f.data, fale::load_schema(f.schema));
  std::string target = f.target;
  if (target.empty()) {
    for (const fale::FeatureSchema& col : ds.schema()) {
      if (col.role == fale::FeatureRole::kTarget) target = col.name;
    }
    if (target.empty()) {
      throw fale::ConfigError(
          "no target column in the schema; pass --target");
    }
  }

  // Seeded 80/20 split; the model trains on the first portion only.
  std::vector<std::size_t> order(ds.row_count());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(f.seed);
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t train_n = (ds.row_count() * 8 + 9) / 10;
  if (train_n == 0 || train_n == ds.row_count()) {
    throw fale::DataError("dataset too small for an 80/20 split");
  }

  std::vector<fale::Row> train_rows, test_rows;
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < train_n ? train_rows : test_rows).push_back(ds.rows()[order[i]]);
  }
  std::vector<std::vector<std::string>> cats;
  for (std::size_t c = 0; c < ds.column_count(); ++c) {
    cats.push_back(ds.categories(c));
  }
  const fale::Dataset train_ds(ds.schema(), cats, std::move(train_rows));
  const fale::Dataset test_ds(ds.schema(), cats, std::move(test_rows));

  fale::TrainConfig config;
  config.learning_rate = f.learning_rate;
  config.epochs = f.epochs;
  config.l2 = f.l2;
  config.seed = f.seed;
  fale::BuiltinModel model = fale::train_logistic(train_ds, target, config);
  model.save(f.out);

  const auto accuracy = [&](const fale::Dataset& part) {
    model.bind(part);
    const std::vector<double> scores = model.predict_batch(part.rows());
    const std::size_t target_col = part.column_index(target);
    std::size_t hits = 0;
    for (std::size_t r = 0; r < part.row_count(); ++r) {
      const double label = part.cell(r, target_col);
      if ((scores[r] >= 0.5 ? 1.0 : 0.0) == label) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(part.row_count());
  };
  std::cout << "train_accuracy " << real_text(accuracy(train_ds)) << "\n";
  std::cout << "test_accuracy " << real_text(accuracy(test_ds)) << "\n";
  return fale::kExitOk;
}

struct SynthFlags {
  std::size_t rows = 1000;
  double beta = 0.3;
  std::string region = "0.6:0.8";
  double p1 = 0.3;
  double base_intercept = 0.5;
  double base_slope = 0.0;
  std::uint64_t seed = 0;
  std::string out = "synth.csv";
  std::string schema_out = "synth_schema.json";
};

int cmd_synth(const SynthFlags& f) {
  const auto colon = f.region.find(':');
  if (colon == std::string::npos) {
    throw fale::ConfigError("--region must look like LO:HI");
  }
  fale::SynthConfig cfg;
  cfg.n_rows = f.rows;
  cfg.beta = f.beta;
  cfg.p1 = f.p1;
  cfg.base_intercept = f.base_intercept;
  cfg.base_slope = f.base_slope;
  cfg.seed = f.seed;
  try {
    cfg.region_low = std::stod(f.region.substr(0, colon));
    cfg.region_high = std::stod(f.region.substr(colon + 1));
  } catch (const std::exception&) {
    throw fale::ConfigError("--region must look like LO:HI");
  }

  const fale::SynthBundle bundle = fale::generate(cfg);
  fale::save_csv(bundle.dataset, f.out);
  fale::save_text(f.schema_out, fale::schema_to_json(bundle.dataset.schema()));
  std::cout << "rows " << bundle.dataset.row_count() << "\n";
  return fale::kExitOk;
}

int run(int argc, char** argv) {
  CLI::App app{"Model-agnostic fairness auditing with accumulated local "
               "effects"};
  app.set_version_flag("--version", fale::kVersion);
  app.require_subcommand(1);
  const std::string command_line = join_args(argc, argv);

  CommonFlags audit_flags;
  std::string protected_flag;
  std::string fairness = "signed-statistical-parity";
  CLI::App* audit = app.add_subcommand(
      "audit", "Audit one feature's accumulated unfairness effect");
  add_common_flags(audit, audit_flags, "fale.svg", "fale.json");
  audit
      ->add_option("--protected", protected_flag,
                   "Protected attribute: ATTR=PROTECTED/NONPROTECTED")
      ->required();
  audit->add_option(
      "--fairness", fairness,
      "statistical-parity, signed-statistical-parity or equal-opportunity");

  CommonFlags ale_flags;
  CLI::App* ale = app.add_subcommand(
      "ale", "Accumulated local effect of one feature on the scores");
  add_common_flags(ale, ale_flags, "ale.svg", "ale.json");

  TrainFlags train_flags;
  CLI::App* train = app.add_subcommand(
      "train", "Train the builtin logistic model on a dataset");
  train->add_option("--data", train_flags.data, "CSV data file")->required();
  train->add_option("--schema", train_flags.schema, "JSON schema sidecar")
      ->required();
  train->add_option("--target", train_flags.target,
                    "Binary 0/1 target column (defaults to the schema's "
                    "target role)");
  train->add_option("--out", train_flags.out, "Model output path");
  train->add_option("--learning-rate", train_flags.learning_rate,
                    "Initial gradient-descent step size");
  train->add_option("--epochs", train_flags.epochs, "Training epochs");
  train->add_option("--l2", train_flags.l2, "L2 penalty on the weights");
  train->add_option("--seed", train_flags.seed, "Split/shuffle seed");

  SynthFlags synth_flags;
  CLI::App* synth = app.add_subcommand(
      "synth", "Generate the synthetic benchmark dataset");
  synth->add_option("--rows", synth_flags.rows, "Row count");
  synth->add_option("--beta", synth_flags.beta,
                    "Injected score penalty in [0,1]");
  synth->add_option("--region", synth_flags.region,
                    "Bias region on x as LO:HI");
  synth->add_option("--p1", synth_flags.p1, "Protected fraction in (0,1)");
  synth->add_option("--base-intercept", synth_flags.base_intercept,
                    "Base score intercept");
  synth->add_option("--base-slope", synth_flags.base_slope,
                    "Base score slope in x");
  synth->add_option("--seed", synth_flags.seed, "Generator seed");
  synth->add_option("--out", synth_flags.out, "CSV output path");
  synth->add_option("--schema-out", synth_flags.schema_out,
                    "Schema output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << one_line(e.what()) << std::endl;
    return fale::kExitConfig;
  }

  if (audit->parsed()) {
    return cmd_audit(audit_flags, protected_flag, fairness, command_line);
  }
  if (ale->parsed()) return cmd_ale(ale_flags, command_line);
  if (train->parsed()) return cmd_train(train_flags);
  return cmd_synth(synth_flags);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const fale::Error& e) {
    std::cerr << "error: " << one_line(e.what()) << std::endl;
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << one_line(e.what()) << std::endl;
    return fale::kExitConfig;
  }
}
