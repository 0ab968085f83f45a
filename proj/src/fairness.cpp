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

#include "fale/fairness.hpp"

#include <cmath>

#include "fale/kernels.hpp"

namespace fale {
namespace {

double group_mean(const GroupPredictions& g, const char* which) {
  if (g.scores.empty()) {
    throw MeasureUndefined(std::string("unfairness measure undefined: ") +
                           which + " group is empty");
  }
  return kernels::stable_mean(g.scores);
}

double positive_mean(const GroupPredictions& g, const char* which) {
  if (!g.labels.has_value()) {
    throw MeasureUndefined(std::string("equal opportunity needs labels for ") +
                           which + " group");
  }
  if (g.labels->size() != g.scores.size()) {
    throw DataError("labels and scores have different lengths");
  }
  std::vector<double> positives;
  for (std::size_t i = 0; i < g.scores.size(); ++i) {
    if ((*g.labels)[i] == 1) positives.push_back(g.scores[i]);
  }
  if (positives.empty()) {
    throw MeasureUndefined(std::string("equal opportunity undefined: ") +
                           which + " group has no positive-label members");
  }
  return kernels::stable_mean(std::move(positives));
}

}  // namespace

UnfairnessMeasure UnfairnessMeasure::make(MeasureId id) {
  UnfairnessMeasure m;
  m.id = id;
  m.needs_labels = id == MeasureId::kEqualOpportunity;
  m.orientation = id == MeasureId::kSignedStatisticalParity
                      ? Orientation::kSignedTowardProtected
                      : Orientation::kAbsolute;
  return m;
}

UnfairnessMeasure UnfairnessMeasure::parse(const std::string& name) {
  if (name == "statistical-parity" || name == "statistical_parity") {
    return make(MeasureId::kStatisticalParity);
  }
  if (name == "signed-statistical-parity" ||
      name == "signed_statistical_parity") {
    return make(MeasureId::kSignedStatisticalParity);
  }
  if (name == "equal-opportunity" || name == "equal_opportunity") {
    return make(MeasureId::kEqualOpportunity);
  }
  throw ConfigError("unknown fairness measure '" + name + "'");
}

const char* UnfairnessMeasure::name() const {
  switch (id) {
    case MeasureId::kStatisticalParity:
      return "statistical-parity";
    case MeasureId::kSignedStatisticalParity:
      return "signed-statistical-parity";
    default:
      return "equal-opportunity";
  }
}

double statistical_parity(const GroupPredictions& g0,
                          const GroupPredictions& g1) {
  return std::abs(signed_statistical_parity(g0, g1));
}

double signed_statistical_parity(const GroupPredictions& g0,
                                 const GroupPredictions& g1) {
  return group_mean(g0, "non-protected") - group_mean(g1, "protected");
}

double equal_opportunity(const GroupPredictions& g0,
                         const GroupPredictions& g1) {
  return std::abs(positive_mean(g0, "non-protected") -
                  positive_mean(g1, "protected"));
}

double evaluate(const UnfairnessMeasure& m, const GroupPredictions& g0,
                const GroupPredictions& g1) {
  switch (m.id) {
    case MeasureId::kStatisticalParity:
      return statistical_parity(g0, g1);
    case MeasureId::kSignedStatisticalParity:
      return signed_statistical_parity(g0, g1);
    default:
      return equal_opportunity(g0, g1);
  }
}

}  // namespace fale
