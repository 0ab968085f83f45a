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

// Deterministic SVG rendering of audit curves: one polyline for the curve,
// one pair of population bars per bin on a secondary axis, and the global
// unfairness baseline in the y-axis label. Bars are the only <rect>
// elements in the document, which keeps element-count checks trivial.

#ifndef FALE_PLOT_HPP_
#define FALE_PLOT_HPP_

#include <string>

#include "fale/ale.hpp"
#include "fale/fale.hpp"

namespace fale {

// counts: bar height proportional to the raw in-bin group count.
// proportions: each group normalized by its own total, so differently
// sized groups can be compared shape to shape.
enum class BarMode { kCounts, kProportions };

struct PlotSpec {
  int width = 720;
  int height = 480;
  std::string curve_color = "#2a6fb0";
  std::string bar_color_g0 = "#b3c7dd";
  std::string bar_color_g1 = "#e8a86a";
  // Empty picks a default per curve type. The rendered label always ends
  // with the global unfairness to 3 decimals in parentheses (FALE only).
  std::string y_label;
  BarMode bar_mode = BarMode::kCounts;
  std::string title;
};

std::string render_svg(const FaleCurve& curve, const PlotSpec& spec = {});
std::string render_svg(const AleCurve& curve, const PlotSpec& spec = {});

}  // namespace fale

#endif  // FALE_PLOT_HPP_
