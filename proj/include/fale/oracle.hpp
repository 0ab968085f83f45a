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

// Black-box scoring interface and its two providers: a builtin logistic
// model trained by full-batch gradient descent, and an external child
// process speaking newline-delimited JSON over stdin/stdout.

#ifndef FALE_ORACLE_HPP_
#define FALE_ORACLE_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "fale/dataset.hpp"

namespace fale {

// Opaque batch scorer f: instance -> real. Implementations are
// deterministic: an identical batch yields identical predictions, and
// splitting a batch is semantically invisible.
class PredictionOracle {
 public:
  virtual ~PredictionOracle() = default;

  // Resolve the dataset's schema and dictionaries. Must be called before
  // the first predict_batch; external providers run their handshake here.
  virtual void bind(const Dataset& ds) = 0;

  // One finite score per row, order preserving.
  virtual std::vector<double> predict_batch(
      const std::vector<Row>& batch) = 0;

  // Engines may only issue concurrent calls when this is true.
  virtual bool concurrency_safe() const = 0;
};

// ---------------------------------------------------------------------------
// Builtin logistic model

struct TrainConfig {
  double learning_rate = 0.1;
  int epochs = 500;
  double l2 = 1e-4;
  std::uint64_t seed = 0;
};

class BuiltinModel final : public PredictionOracle {
 public:
  // kRaw returns the linear score before the sigmoid is applied.
  enum class OutputMode { kProbability, kHardLabel, kRaw };

  // One entry per model input, defining the one-hot/standardized encoding.
  struct Feature {
    std::string name;
    FeatureKind kind = FeatureKind::kNumeric;
    double mean = 0.0;   // numeric standardization shift
    double stdev = 1.0;  // numeric standardization scale
    std::vector<std::string> categories;  // categorical one-hot order
  };

  BuiltinModel(std::vector<Feature> features, std::vector<double> weights,
               double intercept, OutputMode mode = OutputMode::kProbability,
               double threshold = 0.5);

  void bind(const Dataset& ds) override;
  std::vector<double> predict_batch(const std::vector<Row>& batch) override;
  bool concurrency_safe() const override { return true; }

  const std::vector<Feature>& features() const { return features_; }
  const std::vector<double>& weights() const { return weights_; }
  double intercept() const { return intercept_; }
  OutputMode output_mode() const { return output_mode_; }
  void set_output_mode(OutputMode mode, double threshold = 0.5);

  // Width of the encoded feature space the weights live in.
  std::size_t encoded_width() const;

  std::string to_json() const;
  static BuiltinModel from_json(const std::string& text);
  void save(const std::string& path) const;
  static BuiltinModel load(const std::string& path);

  // Loss trace of the training run that produced this model (empty for
  // hand-constructed models).
  const std::vector<double>& training_loss() const { return training_loss_; }

 private:
  friend BuiltinModel train_logistic(const Dataset&, const std::string&,
                                     const TrainConfig&);

  std::vector<Feature> features_;
  std::vector<double> weights_;
  double intercept_ = 0.0;
  OutputMode output_mode_ = OutputMode::kProbability;
  double threshold_ = 0.5;
  std::vector<double> training_loss_;

  // Bind-time resolution against a dataset.
  bool bound_ = false;
  std::size_t bound_arity_ = 0;
  std::vector<std::size_t> source_col_;            // per feature
  std::vector<std::vector<std::int32_t>> code_map_;  // dataset code -> onehot
  std::vector<std::size_t> offset_;                // encoded-space offsets

  void encode_row(const Row& row, std::vector<double>& buf) const;
};

// Full-batch gradient descent on the logistic loss with L2 on the weights.
// Deterministic; a step that would raise the loss by more than 1e-9 halves
// the learning rate and is retried, so the accepted-loss path is
// non-increasing. Target column must be numeric with values in {0,1}.
BuiltinModel train_logistic(const Dataset& ds, const std::string& target,
                            const TrainConfig& config);

// ---------------------------------------------------------------------------
// Derived oracles

// Thresholds another oracle's scores into hard 0/1 labels.
class ThresholdOracle final : public PredictionOracle {
 public:
  ThresholdOracle(std::shared_ptr<PredictionOracle> inner, double threshold)
      : inner_(std::move(inner)), threshold_(threshold) {}

  void bind(const Dataset& ds) override { inner_->bind(ds); }
  std::vector<double> predict_batch(const std::vector<Row>& batch) override {
    std::vector<double> scores = inner_->predict_batch(batch);
    for (double& s : scores) s = s >= threshold_ ? 1.0 : 0.0;
    return scores;
  }
  bool concurrency_safe() const override {
    return inner_->concurrency_safe();
  }

 private:
  std::shared_ptr<PredictionOracle> inner_;
  double threshold_;
};

// ---------------------------------------------------------------------------
// External subprocess oracle
//
// Wire protocol, one JSON document per line:
//   engine -> oracle  {"type":"hello","schema":[{"name":..,"kind":..},..]}
//   oracle -> engine  {"type":"ready"}
//   engine -> oracle  {"type":"predict","id":N,"instances":[[v,..],..]}
//   oracle -> engine  {"type":"predictions","id":N,"scores":[s,..]}
// Instances carry the non-target, non-ignored columns in schema order;
// numeric values as JSON numbers, categorical as label strings.

struct ExternalOracleOptions {
  double handshake_timeout_s = 10.0;
  double response_timeout_s = 300.0;
  std::size_t batch_limit = 4096;
};

class ExternalOracle final : public PredictionOracle {
 public:
  // Spawns the child immediately; throws OracleError on spawn failure.
  explicit ExternalOracle(std::vector<std::string> command,
                          ExternalOracleOptions options = {});
  ~ExternalOracle() override;

  ExternalOracle(const ExternalOracle&) = delete;
  ExternalOracle& operator=(const ExternalOracle&) = delete;

  void bind(const Dataset& ds) override;
  std::vector<double> predict_batch(const std::vector<Row>& batch) override;
  // Requests must be serialized: a single request in flight.
  bool concurrency_safe() const override { return false; }

 private:
  struct Child;
  std::unique_ptr<Child> child_;
  ExternalOracleOptions options_;

  const Dataset* bound_ = nullptr;
  std::vector<std::size_t> input_cols_;
  std::uint64_t next_id_ = 0;

  std::vector<double> predict_chunk(const std::vector<Row>& batch,
                                    std::size_t begin, std::size_t end);
};

std::unique_ptr<PredictionOracle> spawn_external(
    std::vector<std::string> command, ExternalOracleOptions options = {});

}  // namespace fale

#endif  // FALE_ORACLE_HPP_
