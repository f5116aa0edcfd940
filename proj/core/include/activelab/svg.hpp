#pragma once

#include <span>
#include <string>
#include <vector>

namespace activelab {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

/// Self-contained SVG with the charts laid out left to right, one polyline
/// per series and a shared legend per chart.
std::string render_svg(std::span<const LineChart> charts, int chart_width = 520,
                       int chart_height = 380);

std::string xml_escape(std::string_view text);

}  // namespace activelab
