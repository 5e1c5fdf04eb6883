#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "knotscope/dataset.hpp"
#include "knotscope/stats.hpp"

namespace knotscope {

struct PointSeries {
  std::string label;
  std::vector<double> x, y;
  std::string color; // empty = palette
};

struct LineSeries {
  std::string label;
  std::vector<double> x, y;
  std::string color;
  bool step = false; // right-continuous steps between samples
};

struct PlotOptions {
  std::string title, xlabel, ylabel;
  int width = 800;
  int height = 560;
  // Scatter plots above this many points are uniformly downsampled with
  // `seed`; the choice is recorded in the SVG metadata.
  std::size_t max_points = 100000;
  std::uint64_t seed = 1;
  // Off by default so repeated runs are byte-identical.
  bool timestamp = false;
};

std::string svg_scatter(const std::vector<PointSeries>& points, const std::vector<LineSeries>& lines,
                        const PlotOptions& opt);

// Overlaid density outlines.
std::string svg_histogram(const std::vector<std::pair<std::string, Histogram>>& hists,
                          const PlotOptions& opt);

// Step curve f(x) with an optional fitted sigmoid overlay.
std::string svg_density(const DensityCurve& curve, const std::optional<SigmoidParams>& fit,
                        const PlotOptions& opt);

} // namespace knotscope
