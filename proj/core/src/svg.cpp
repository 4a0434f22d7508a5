#include "runtrim/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>


namespace runtrim {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;
constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string escape(const std::string& text) {
  std::string out;
  for (const char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

// Round step (1, 2 or 5 times a power of ten) giving about five ticks.
double tick_step(double span) {
  const double raw = span / 5.0;
  const double power = std::pow(10.0, std::floor(std::log10(raw)));
  for (const double m : {1.0, 2.0, 5.0}) {
    if (raw <= m * power) return m * power;
  }
  return 10.0 * power;
}

}  // namespace

std::string render_line_chart(const LineChart& chart) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
  double y0 = 0.0, y1 = -std::numeric_limits<double>::infinity();
  for (const auto& series : chart.series) {
    for (const auto& [x, y] : series.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (!std::isfinite(x0)) {
    x0 = 0.0;
    x1 = 1.0;
  }
  if (!std::isfinite(y1)) y1 = 1.0;
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) y1 = y0 + 1.0;
  const double y_step = tick_step(y1 - y0);
  y1 = std::ceil(y1 / y_step) * y_step;
  const double x_step = tick_step(x1 - x0);

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * plot_w; };
  auto sy = [&](double y) { return kTop + plot_h - (y - y0) / (y1 - y0) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(chart.title) << "</text>\n";

  for (double y = y0; y <= y1 + 1e-9 * y_step; y += y_step) {
    svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(sy(y)) << "\" x2=\"" << num(kLeft + plot_w)
        << "\" y2=\"" << num(sy(y)) << "\" stroke=\"#e0e0e0\"/>\n";
    svg << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(sy(y) + 4) << "\" text-anchor=\"end\">" << num(y)
        << "</text>\n";
  }
  for (double x = std::ceil(x0 / x_step) * x_step; x <= x1 + 1e-9 * x_step; x += x_step) {
    svg << "<line x1=\"" << num(sx(x)) << "\" y1=\"" << num(kTop + plot_h) << "\" x2=\"" << num(sx(x))
        << "\" y2=\"" << num(kTop + plot_h + 5) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << num(sx(x)) << "\" y=\"" << num(kTop + plot_h + 19) << "\" text-anchor=\"middle\">"
        << num(x) << "</text>\n";
  }
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 12)
      << "\" text-anchor=\"middle\">" << escape(chart.x_label) << "</text>\n";
  svg << "<text transform=\"translate(18," << num(kTop + plot_h / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(chart.y_label) << "</text>\n";

  for (std::size_t i = 0; i < chart.series.size(); ++i) {
    const auto& series = chart.series[i];
    const char* color = kPalette[i % kPalette.size()];
    auto points = series.points;
    std::sort(points.begin(), points.end());
    std::string path;
    for (const auto& [x, y] : points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      path += (path.empty() ? "" : " ") + num(sx(x)) + "," + num(sy(y));
      svg << "<circle cx=\"" << num(sx(x)) << "\" cy=\"" << num(sy(y)) << "\" r=\"3\" fill=\"" << color
          << "\"/>\n";
    }
    if (!path.empty()) {
      svg << "<polyline points=\"" << path << "\" fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"2\"/>\n";
    }
    const double ly = kTop + 10 + 18.0 * static_cast<double>(i);
    const double lx = kLeft + plot_w + 12;
    svg << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 20) << "\" y2=\"" << num(ly)
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << num(lx + 26) << "\" y=\"" << num(ly + 4) << "\">" << escape(series.name) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace runtrim
