#pragma once

#include <string>
#include <vector>

namespace slicekit {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
};

// Standalone SVG line chart (axes, ticks, one polyline per series, legend).
// Points that cannot be placed on a log axis (<= 0) or are non-finite are dropped.
std::string render_line_plot(const PlotSpec& spec, const std::vector<PlotSeries>& series);

}  // namespace slicekit
