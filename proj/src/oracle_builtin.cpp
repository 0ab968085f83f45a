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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "fale/error.hpp"
#include "fale/kernels.hpp"
#include "fale/log.hpp"
#include "fale/oracle.hpp"

namespace fale {
namespace {

using nlohmann::json;

double stable_sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Per-row logistic loss from the logit, stable for large |z|.
double bce_from_logit(double z, double y) {
  return std::max(z, 0.0) - y * z + std::log1p(std::exp(-std::abs(z)));
}

}  // namespace

BuiltinModel::BuiltinModel(std::vector<Feature> features,
                           std::vector<double> weights, double intercept,
                           OutputMode mode, double threshold)
    : features_(std::move(features)),
      weights_(std::move(weights)),
      intercept_(intercept),
      output_mode_(mode),
      threshold_(threshold) {
  if (weights_.size() != encoded_width()) {
    throw ConfigError("builtin model: weight vector length " +
                      std::to_string(weights_.size()) +
                      " does not match encoded width " +
                      std::to_string(encoded_width()));
  }
}

std::size_t BuiltinModel::encoded_width() const {
  std::size_t width = 0;
  for (const Feature& f : features_) {
    width += f.kind == FeatureKind::kNumeric ? 1 : f.categories.size();
  }
  return width;
}

void BuiltinModel::set_output_mode(OutputMode mode, double threshold) {
  output_mode_ = mode;
  threshold_ = threshold;
}

void BuiltinModel::bind(const Dataset& ds) {
  source_col_.clear();
  code_map_.clear();
  offset_.clear();
  std::size_t offset = 0;
  for (const Feature& f : features_) {
    const std::size_t col = ds.column_index(f.name);
    if (ds.schema()[col].kind != f.kind) {
      throw OracleError("model feature '" + f.name +
                        "' kind does not match dataset column");
    }
    source_col_.push_back(col);
    offset_.push_back(offset);
    if (f.kind == FeatureKind::kNumeric) {
      code_map_.emplace_back();
      offset += 1;
    } else {
      // Map dataset dictionary codes to the model's one-hot positions.
      const auto& dict = ds.categories(col);
      std::vector<std::int32_t> map(dict.size(), -1);
      for (std::size_t c = 0; c < dict.size(); ++c) {
        const auto it = std::find(f.categories.begin(), f.categories.end(),
                                  dict[c]);
        if (it == f.categories.end()) {
          throw OracleError("model feature '" + f.name +
                            "' does not know label '" + dict[c] + "'");
        }
        map[c] = static_cast<std::int32_t>(it - f.categories.begin());
      }
      code_map_.push_back(std::move(map));
      offset += f.categories.size();
    }
  }
  bound_arity_ = ds.column_count();
  bound_ = true;
}

void BuiltinModel::encode_row(const Row& row, std::vector<double>& buf) const {
  std::fill(buf.begin(), buf.end(), 0.0);
  for (std::size_t i = 0; i < features_.size(); ++i) {
    const Feature& f = features_[i];
    const double raw = row[source_col_[i]];
    if (f.kind == FeatureKind::kNumeric) {
      buf[offset_[i]] = (raw - f.mean) / f.stdev;
    } else {
      const auto code = static_cast<std::size_t>(raw);
      if (code >= code_map_[i].size()) {
        throw OracleError("encoded category out of range for feature '" +
                          f.name + "'");
      }
      buf[offset_[i] + static_cast<std::size_t>(code_map_[i][code])] = 1.0;
    }
  }
}

std::vector<double> BuiltinModel::predict_batch(
    const std::vector<Row>& batch) {
  if (!bound_) throw OracleError("builtin model used before bind()");
  std::vector<double> scores;
  scores.reserve(batch.size());
  std::vector<double> buf(encoded_width(), 0.0);
  for (const Row& row : batch) {
    if (row.size() != bound_arity_) {
      throw OracleError("batch row arity does not match bound schema");
    }
    encode_row(row, buf);
    const double z = intercept_ + kernels::dot(weights_, buf);
    double score = 0.0;
    switch (output_mode_) {
      case OutputMode::kProbability:
        score = stable_sigmoid(z);
        break;
      case OutputMode::kHardLabel:
        score = stable_sigmoid(z) >= threshold_ ? 1.0 : 0.0;
        break;
      case OutputMode::kRaw:
        score = z;
        break;
    }
    scores.push_back(score);
  }
  return scores;
}

std::string BuiltinModel::to_json() const {
  json features = json::array();
  for (const Feature& f : features_) {
    if (f.kind == FeatureKind::kNumeric) {
      features.push_back({{"name", f.name},
                          {"kind", "numeric"},
                          {"mean", f.mean},
                          {"stdev", f.stdev}});
    } else {
      features.push_back({{"name", f.name},
                          {"kind", "categorical"},
                          {"categories", f.categories}});
    }
  }
  json doc = {
      {"format", "fale-model-v1"},
      {"type", "logistic"},
      {"intercept", intercept_},
      {"weights", weights_},
      {"features", features},
      {"output_mode", output_mode_ == OutputMode::kProbability
                          ? "probability"
                          : (output_mode_ == OutputMode::kHardLabel
                                 ? "hard_label"
                                 : "raw")},
      {"threshold", threshold_},
  };
  return doc.dump(2) + "\n";
}

BuiltinModel BuiltinModel::from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("model file: invalid JSON: ") + e.what());
  }
  if (doc.value("format", std::string()) != "fale-model-v1") {
    throw DataError("model file: unknown format tag");
  }
  std::vector<Feature> features;
  for (const auto& entry : doc.at("features")) {
    Feature f;
    f.name = entry.at("name").get<std::string>();
    const std::string kind = entry.at("kind").get<std::string>();
    if (kind == "numeric") {
      f.kind = FeatureKind::kNumeric;
      f.mean = entry.value("mean", 0.0);
      f.stdev = entry.value("stdev", 1.0);
    } else if (kind == "categorical") {
      f.kind = FeatureKind::kCategorical;
      f.categories = entry.at("categories").get<std::vector<std::string>>();
    } else {
      throw DataError("model file: unknown feature kind '" + kind + "'");
    }
    features.push_back(std::move(f));
  }
  const std::string mode_name =
      doc.value("output_mode", std::string("probability"));
  OutputMode mode = OutputMode::kProbability;
  if (mode_name == "hard_label") {
    mode = OutputMode::kHardLabel;
  } else if (mode_name == "raw") {
    mode = OutputMode::kRaw;
  } else if (mode_name != "probability") {
    throw DataError("model file: unknown output mode '" + mode_name + "'");
  }
  try {
    return BuiltinModel(std::move(features),
                        doc.at("weights").get<std::vector<double>>(),
                        doc.at("intercept").get<double>(), mode,
                        doc.value("threshold", 0.5));
  } catch (const json::exception& e) {
    throw DataError(std::string("model file: ") + e.what());
  }
}

void BuiltinModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file: " + path);
  out << to_json();
  if (!out) throw DataError("model write failed: " + path);
}

BuiltinModel BuiltinModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

BuiltinModel train_logistic(const Dataset& ds, const std::string& target,
                            const TrainConfig& config) {
  if (ds.row_count() == 0) throw DataError("cannot train on empty dataset");
  const std::size_t target_col = ds.column_index(target);
  if (ds.schema()[target_col].kind != FeatureKind::kNumeric) {
    throw DataError("target column '" + target + "' must be numeric 0/1");
  }

  std::vector<double> labels;
  labels.reserve(ds.row_count());
  for (std::size_t r = 0; r < ds.row_count(); ++r) {
    const double y = ds.cell(r, target_col);
    if (y != 0.0 && y != 1.0) {
      throw DataError("target column '" + target +
                      "' has non-binary value " + std::to_string(y) +
                      " at data row " + std::to_string(r + 1));
    }
    labels.push_back(y);
  }

  // Model inputs: every feature/protected column except the target itself.
  std::vector<std::size_t> input_cols;
  for (std::size_t c : ds.model_input_columns()) {
    if (c != target_col) input_cols.push_back(c);
  }
  if (input_cols.empty()) throw DataError("no feature columns to train on");

  std::vector<BuiltinModel::Feature> features;
  for (std::size_t c : input_cols) {
    BuiltinModel::Feature f;
    f.name = ds.schema()[c].name;
    f.kind = ds.schema()[c].kind;
    if (f.kind == FeatureKind::kNumeric) {
      std::vector<double> col;
      col.reserve(ds.row_count());
      for (std::size_t r = 0; r < ds.row_count(); ++r) {
        col.push_back(ds.cell(r, c));
      }
      const double n = static_cast<double>(col.size());
      f.mean = kernels::sum(col) / n;
      double ss = 0.0;
      for (double v : col) ss += (v - f.mean) * (v - f.mean);
      f.stdev = std::sqrt(ss / n);
      if (f.stdev == 0.0) f.stdev = 1.0;
    } else {
      f.categories = ds.categories(c);
    }
    features.push_back(std::move(f));
  }

  std::size_t width = 0;
  for (const auto& f : features) {
    width += f.kind == FeatureKind::kNumeric ? 1 : f.categories.size();
  }
  BuiltinModel model(std::move(features), std::vector<double>(width, 0.0),
                     0.0);
  model.bind(ds);

  // Pre-encode the design matrix once.
  const std::size_t n = ds.row_count();
  std::vector<std::vector<double>> x(n, std::vector<double>(width, 0.0));
  for (std::size_t r = 0; r < n; ++r) model.encode_row(ds.rows()[r], x[r]);

  auto loss_at = [&](const std::vector<double>& w, double b) {
    std::vector<double> per_row(n);
    for (std::size_t r = 0; r < n; ++r) {
      per_row[r] = bce_from_logit(b + kernels::dot(w, x[r]), labels[r]);
    }
    double reg = 0.5 * config.l2 * kernels::dot(w, w);
    return kernels::sum(per_row) / static_cast<double>(n) + reg;
  };

  std::vector<double>& w = model.weights_;
  double& b = model.intercept_;
  double lr = config.learning_rate;
  double loss = loss_at(w, b);
  model.training_loss_.push_back(loss);

  std::vector<double> grad(width, 0.0);
  std::vector<double> w_next(width, 0.0);
  constexpr double kLossSlack = 1e-9;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_b = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double p = stable_sigmoid(b + kernels::dot(w, x[r]));
      const double residual = p - labels[r];
      kernels::axpy(residual, x[r], grad);
      grad_b += residual;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    kernels::scale(inv_n, grad);
    kernels::axpy(config.l2, w, grad);
    grad_b *= inv_n;

    // Backtracking: only accept steps that do not raise the loss beyond
    // the slack; otherwise halve the rate and retry.
    bool accepted = false;
    while (lr > 1e-300) {
      w_next = w;
      kernels::axpy(-lr, grad, w_next);
      const double b_next = b - lr * grad_b;
      const double next_loss = loss_at(w_next, b_next);
      if (next_loss <= loss + kLossSlack) {
        w = w_next;
        b = b_next;
        loss = next_loss;
        accepted = true;
        break;
      }
      lr *= 0.5;
    }
    if (!accepted) {
      FALE_DEBUG("training converged after " << epoch << " epochs");
      break;
    }
    model.training_loss_.push_back(loss);
  }
  FALE_INFO("trained logistic model, final loss "
            << loss << ", " << model.training_loss_.size() - 1
            << " accepted steps");
  (void)config.seed;  // full-batch path is deterministic
  return model;
}

std::unique_ptr<PredictionOracle> spawn_external(
    std::vector<std::string> command, ExternalOracleOptions options) {
  return std::make_unique<ExternalOracle>(std::move(command), options);
}

}  // namespace fale
