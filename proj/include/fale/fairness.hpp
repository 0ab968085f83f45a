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

// Unfairness functionals u(G0, G1) over two prediction multisets. Group g0
// is the non-protected population, g1 the protected one; the signed parity
// variant is positive when the protected group receives less favorable
// outcomes. Group means use order-canonical summation, so all measures are
// invariant to within-group permutation.

#ifndef FALE_FAIRNESS_HPP_
#define FALE_FAIRNESS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "fale/error.hpp"

namespace fale {

// Thrown when a measure has no defined value on the given groups (empty
// group, no positives for equal opportunity). Callers decide the policy;
// the FALE engine turns this into a degenerate bin.
class MeasureUndefined : public Error {
 public:
  explicit MeasureUndefined(const std::string& what)
      : Error(kExitData, what) {}
};

struct GroupPredictions {
  std::vector<double> scores;
  // Ground-truth labels, required by equal opportunity only.
  std::optional<std::vector<int>> labels;
};

enum class MeasureId {
  kStatisticalParity,
  kSignedStatisticalParity,
  kEqualOpportunity,
};

enum class Orientation { kAbsolute, kSignedTowardProtected };

struct UnfairnessMeasure {
  MeasureId id = MeasureId::kStatisticalParity;
  bool needs_labels = false;
  Orientation orientation = Orientation::kAbsolute;

  static UnfairnessMeasure make(MeasureId id);
  // Accepts the CLI spellings statistical-parity, signed-statistical-parity
  // and equal-opportunity.
  static UnfairnessMeasure parse(const std::string& name);
  const char* name() const;
};

// |mean(g0) - mean(g1)|
double statistical_parity(const GroupPredictions& g0,
                          const GroupPredictions& g1);

// mean(g0) - mean(g1); positive = protected group worse off.
double signed_statistical_parity(const GroupPredictions& g0,
                                 const GroupPredictions& g1);

// |TPR(g0) - TPR(g1)| over the label-1 members of each group.
double equal_opportunity(const GroupPredictions& g0,
                         const GroupPredictions& g1);

double evaluate(const UnfairnessMeasure& m, const GroupPredictions& g0,
                const GroupPredictions& g1);

}  // namespace fale

#endif  // FALE_FAIRNESS_HPP_
