#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fxtcore/trace.hpp"

namespace fxt::plot {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

/// Renders labelled polylines with axes and a legend into a static SVG.
std::string render_svg(const std::vector<Series>& series, const std::string& title,
                       const std::string& x_label, const std::string& y_label);

/// Builds the series for one plot kind from a trace; throws ConfigError on
/// an unknown kind or a trace lacking the needed columns.
std::vector<Series> series_for_kind(const SimulationTrace& trace,
                                    const std::string& kind);

}  // namespace fxt::plot
