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

#include "fale/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fale/error.hpp"

namespace fale {
namespace {

// Fixed-width decimal forms keep the output byte-deterministic.
std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string baseline3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

struct LinMap {
  double d0 = 0.0, d1 = 1.0, p0 = 0.0, p1 = 1.0;
  double operator()(double v) const {
    return p0 + (v - d0) / (d1 - d0) * (p1 - p0);
  }
};

struct RenderBin {
  double x_left = 0.0;
  double x_right = 0.0;
  double curve_x = 0.0;
  double curve_y = 0.0;
  double bar0 = 0.0;
  double bar1 = -1.0;  // negative: single-bar mode
  bool flagged = false;
};

struct Tick {
  double x = 0.0;
  std::string label;
};

struct RenderInput {
  std::vector<RenderBin> bins;
  double x_lo = 0.0;
  double x_hi = 1.0;
  std::vector<Tick> x_ticks;
  std::string x_label;
  std::string y_label_text;
  std::string bar_axis_label;
  bool paired_bars = false;
  std::string legend0;
  std::string legend1;
};

std::string render(const RenderInput& in, const PlotSpec& spec) {
  if (spec.width <= 0 || spec.height <= 0) {
    throw ConfigError("plot dimensions must be positive");
  }
  if (in.bins.empty()) throw ConfigError("empty curve");

  const double W = spec.width, H = spec.height;
  const double px0 = 70.0, px1 = W - 70.0;
  const double py0 = 40.0, py1 = H - 50.0;

  double ylo = in.bins[0].curve_y, yhi = ylo;
  for (const RenderBin& b : in.bins) {
    ylo = std::min(ylo, b.curve_y);
    yhi = std::max(yhi, b.curve_y);
  }
  double pad = 0.08 * (yhi - ylo);
  if (pad == 0.0) pad = 0.5;
  ylo -= pad;
  yhi += pad;

  const LinMap xmap{in.x_lo, in.x_hi, px0, px1};
  const LinMap ymap{ylo, yhi, py1, py0};

  double max_bar = 0.0;
  for (const RenderBin& b : in.bins) {
    max_bar = std::max(max_bar, std::max(b.bar0, b.bar1));
  }
  if (max_bar <= 0.0) max_bar = 1.0;
  const double band = 0.22 * (py1 - py0);

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(spec.width) + "\" height=\"" +
         std::to_string(spec.height) + "\" viewBox=\"0 0 " +
         std::to_string(spec.width) + " " + std::to_string(spec.height) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n";

  if (!spec.title.empty()) {
    svg += "  <text class=\"title\" x=\"" + px(W / 2) +
           "\" y=\"24.00\" text-anchor=\"middle\" font-size=\"15\">" +
           xml_escape(spec.title) + "</text>\n";
  }

  // Population bars first so the curve draws on top of them.
  for (const RenderBin& b : in.bins) {
    const double xl = xmap(b.x_left);
    const double xr = xmap(b.x_right);
    const double w = xr - xl;
    const auto bar = [&](double value, double bx, double bw,
                         const std::string& cls, const std::string& color) {
      const double h = value / max_bar * band;
      svg += "    <rect class=\"" + cls + "\" x=\"" + px(bx) + "\" y=\"" +
             px(py1 - h) + "\" width=\"" + px(bw) + "\" height=\"" + px(h) +
             "\" fill=\"" + color + "\" fill-opacity=\"0.85\"/>\n";
    };
    if (in.paired_bars) {
      bar(b.bar0, xl + 0.16 * w, 0.32 * w, "bar bar-g0", spec.bar_color_g0);
      bar(b.bar1, xl + 0.52 * w, 0.32 * w, "bar bar-g1", spec.bar_color_g1);
    } else {
      bar(b.bar0, xl + 0.25 * w, 0.50 * w, "bar", spec.bar_color_g0);
    }
  }

  // Frame drawn as a path: <rect> stays reserved for the bars.
  svg += "  <path class=\"frame\" d=\"M" + px(px0) + " " + px(py0) + " L" +
         px(px1) + " " + px(py0) + " L" + px(px1) + " " + px(py1) + " L" +
         px(px0) + " " + px(py1) + " Z\" fill=\"none\" stroke=\"#333333\"/>\n";

  for (const Tick& t : in.x_ticks) {
    const double x = xmap(t.x);
    svg += "  <line x1=\"" + px(x) + "\" y1=\"" + px(py1) + "\" x2=\"" +
           px(x) + "\" y2=\"" + px(py1 + 5) + "\" stroke=\"#333333\"/>\n";
    svg += "  <text x=\"" + px(x) + "\" y=\"" + px(py1 + 18) +
           "\" text-anchor=\"middle\">" + xml_escape(t.label) + "</text>\n";
  }

  for (int i = 0; i < 5; ++i) {
    const double v = ylo + (yhi - ylo) * i / 4.0;
    const double y = ymap(v);
    svg += "  <line x1=\"" + px(px0 - 5) + "\" y1=\"" + px(y) + "\" x2=\"" +
           px(px0) + "\" y2=\"" + px(y) + "\" stroke=\"#333333\"/>\n";
    svg += "  <text x=\"" + px(px0 - 8) + "\" y=\"" + px(y + 4) +
           "\" text-anchor=\"end\">" + num(v) + "</text>\n";
  }

  // Secondary axis carries the bar scale.
  for (int i = 0; i < 2; ++i) {
    const double v = i == 0 ? 0.0 : max_bar;
    const double y = py1 - v / max_bar * band;
    svg += "  <line x1=\"" + px(px1) + "\" y1=\"" + px(y) + "\" x2=\"" +
           px(px1 + 5) + "\" y2=\"" + px(y) + "\" stroke=\"#333333\"/>\n";
    svg += "  <text x=\"" + px(px1 + 8) + "\" y=\"" + px(y + 4) +
           "\" text-anchor=\"start\">" + num(v) + "</text>\n";
  }

  if (ylo < 0.0 && yhi > 0.0) {
    const double y = ymap(0.0);
    svg += "  <line class=\"zero\" x1=\"" + px(px0) + "\" y1=\"" + px(y) +
           "\" x2=\"" + px(px1) + "\" y2=\"" + px(y) +
           "\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>\n";
  }

  for (const RenderBin& b : in.bins) {
    if (!b.flagged) continue;
    const double cx = xmap(0.5 * (b.x_left + b.x_right));
    const double cy = py1 - band - 10.0;
    svg += "  <path class=\"degenerate\" d=\"M" + px(cx - 4) + " " +
           px(cy - 4) + " L" + px(cx + 4) + " " + px(cy + 4) + " M" +
           px(cx - 4) + " " + px(cy + 4) + " L" + px(cx + 4) + " " +
           px(cy - 4) + "\" stroke=\"#bb3333\" stroke-width=\"1.5\"/>\n";
  }

  svg += "  <polyline class=\"curve\" points=\"";
  for (std::size_t i = 0; i < in.bins.size(); ++i) {
    if (i) svg += " ";
    svg += px(xmap(in.bins[i].curve_x)) + "," + px(ymap(in.bins[i].curve_y));
  }
  svg += "\" fill=\"none\" stroke=\"" + spec.curve_color +
         "\" stroke-width=\"2\"/>\n";

  const double cy = 0.5 * (py0 + py1);
  svg += "  <text class=\"y-label\" x=\"18.00\" y=\"" + px(cy) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 18.00 " + px(cy) +
         ")\">" + xml_escape(in.y_label_text) + "</text>\n";
  svg += "  <text class=\"bar-label\" x=\"" + px(W - 18) + "\" y=\"" +
         px(cy) + "\" text-anchor=\"middle\" transform=\"rotate(90 " +
         px(W - 18) + " " + px(cy) + ")\">" + xml_escape(in.bar_axis_label) +
         "</text>\n";
  svg += "  <text class=\"x-label\" x=\"" + px(0.5 * (px0 + px1)) +
         "\" y=\"" + px(H - 12) + "\" text-anchor=\"middle\">" +
         xml_escape(in.x_label) + "</text>\n";

  if (!in.legend0.empty()) {
    const double lx = px1 - 150.0;
    svg += "  <circle cx=\"" + px(lx) + "\" cy=\"" + px(py0 + 12) +
           "\" r=\"5\" fill=\"" + spec.bar_color_g0 + "\"/>\n";
    svg += "  <text x=\"" + px(lx + 10) + "\" y=\"" + px(py0 + 16) + "\">" +
           xml_escape(in.legend0) + "</text>\n";
    svg += "  <circle cx=\"" + px(lx) + "\" cy=\"" + px(py0 + 28) +
           "\" r=\"5\" fill=\"" + spec.bar_color_g1 + "\"/>\n";
    svg += "  <text x=\"" + px(lx + 10) + "\" y=\"" + px(py0 + 32) + "\">" +
           xml_escape(in.legend1) + "</text>\n";
  }

  svg += "</svg>\n";
  return svg;
}

void numeric_geometry(const BinPartition& p, std::size_t k, RenderBin& bin) {
  bin.x_left = p.boundaries[k - 1];
  bin.x_right = p.boundaries[k];
  bin.curve_x = p.x_position(k);
}

void categorical_geometry(std::size_t k, RenderBin& bin) {
  bin.x_left = static_cast<double>(k) - 0.5;
  bin.x_right = static_cast<double>(k) + 0.5;
  bin.curve_x = static_cast<double>(k);
}

void fill_domain_and_ticks(const BinPartition& p, RenderInput& in) {
  if (p.kind == FeatureKind::kNumeric) {
    in.x_lo = p.boundaries.front();
    in.x_hi = p.boundaries.back();
    const std::size_t n = p.boundaries.size();
    const std::size_t step = std::max<std::size_t>(1, (n + 7) / 8);
    for (std::size_t i = 0; i < n; i += step) {
      in.x_ticks.push_back({p.boundaries[i], num(p.boundaries[i])});
    }
    if ((n - 1) % step != 0) {
      in.x_ticks.push_back({p.boundaries[n - 1], num(p.boundaries[n - 1])});
    }
  } else {
    const std::size_t k = p.labels.size();
    in.x_lo = 0.5;
    in.x_hi = static_cast<double>(k) + 0.5;
    const std::size_t step = std::max<std::size_t>(1, (k + 11) / 12);
    for (std::size_t i = 0; i < k; i += step) {
      in.x_ticks.push_back({static_cast<double>(i + 1), p.labels[i]});
    }
  }
}

}  // namespace

std::string render_svg(const FaleCurve& curve, const PlotSpec& spec) {
  if (curve.per_bin.empty()) throw ConfigError("empty curve");
  RenderInput in;
  in.paired_bars = true;

  double total0 = 0.0, total1 = 0.0;
  for (const BinResult& b : curve.per_bin) {
    total0 += static_cast<double>(b.n0);
    total1 += static_cast<double>(b.n1);
  }
  if (total0 <= 0.0) total0 = 1.0;
  if (total1 <= 0.0) total1 = 1.0;

  for (const BinResult& b : curve.per_bin) {
    RenderBin bin;
    if (curve.partition.kind == FeatureKind::kNumeric) {
      numeric_geometry(curve.partition, b.index, bin);
    } else {
      categorical_geometry(b.index, bin);
    }
    bin.curve_y = b.centered;
    if (spec.bar_mode == BarMode::kCounts) {
      bin.bar0 = static_cast<double>(b.n0);
      bin.bar1 = static_cast<double>(b.n1);
    } else {
      bin.bar0 = static_cast<double>(b.n0) / total0;
      bin.bar1 = static_cast<double>(b.n1) / total1;
    }
    bin.flagged = b.degenerate;
    in.bins.push_back(bin);
  }
  fill_domain_and_ticks(curve.partition, in);

  in.x_label = curve.feature;
  const std::string base = spec.y_label.empty() ? "FALE" : spec.y_label;
  in.y_label_text = base + " (" + baseline3(curve.global_unfairness) + ")";
  in.bar_axis_label =
      spec.bar_mode == BarMode::kCounts ? "population" : "group share";
  in.legend0 = curve.protected_spec.attribute + "=" +
               curve.protected_spec.non_protected_value;
  in.legend1 = curve.protected_spec.attribute + "=" +
               curve.protected_spec.protected_value;
  return render(in, spec);
}

std::string render_svg(const AleCurve& curve, const PlotSpec& spec) {
  if (curve.centered.empty()) throw ConfigError("empty curve");
  RenderInput in;
  in.paired_bars = false;

  double total = 0.0;
  for (std::size_t c : curve.bin_counts) total += static_cast<double>(c);
  if (total <= 0.0) total = 1.0;

  for (std::size_t i = 0; i < curve.centered.size(); ++i) {
    RenderBin bin;
    if (curve.partition.kind == FeatureKind::kNumeric) {
      numeric_geometry(curve.partition, i + 1, bin);
    } else {
      categorical_geometry(i + 1, bin);
    }
    bin.curve_y = curve.centered[i];
    const double count = static_cast<double>(curve.bin_counts[i]);
    bin.bar0 = spec.bar_mode == BarMode::kCounts ? count : count / total;
    bin.flagged = curve.empty_bins[i];
    in.bins.push_back(bin);
  }
  fill_domain_and_ticks(curve.partition, in);

  in.x_label = curve.feature;
  in.y_label_text = spec.y_label.empty() ? "ALE" : spec.y_label;
  in.bar_axis_label =
      spec.bar_mode == BarMode::kCounts ? "population" : "share";
  return render(in, spec);
}

}  // namespace fale
