#pragma once

#include <string>
#include <utility>
#include <vector>

namespace runtrim {

struct ChartSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<ChartSeries> series;
};

/// Self-contained SVG document with axes, ticks and a legend.
std::string render_line_chart(const LineChart& chart);

}  // namespace runtrim
