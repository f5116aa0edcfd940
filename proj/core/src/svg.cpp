#include "activelab/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace activelab {
namespace {

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// 1, 2 or 5 times a power of ten, giving roughly `target` ticks over span.
double nice_step(double span, int target) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  const double step = norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0;
  return step * mag;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
    if (hi == lo) hi = lo + 1.0;
  }
};

void render_chart(std::ostringstream& out, const LineChart& chart, double ox, int width,
                  int height) {
  const double left = ox + 70, right = ox + width - 20, top = 40, bottom = height - 60.0;
  Range xr, yr;
  for (const auto& s : chart.series) {
    for (double v : s.x) xr.add(v);
    for (double v : s.y) yr.add(v);
  }
  xr.finish();
  yr.finish();
  const double ystep = nice_step(yr.hi - yr.lo, 5);
  yr.lo = std::floor(yr.lo / ystep) * ystep;
  yr.hi = std::ceil(yr.hi / ystep) * ystep;
  const double xstep = nice_step(xr.hi - xr.lo, 5);

  auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * (right - left); };
  auto py = [&](double y) { return bottom - (y - yr.lo) / (yr.hi - yr.lo) * (bottom - top); };

  out << "<g class=\"chart\">\n";
  out << "<text x=\"" << num((left + right) / 2) << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-size=\"15\">" << xml_escape(chart.title) << "</text>\n";
  out << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(right - left)
      << "\" height=\"" << num(bottom - top) << "\" fill=\"none\" stroke=\"#333\"/>\n";

  for (double y = yr.lo; y <= yr.hi + ystep * 1e-9; y += ystep) {
    out << "<line x1=\"" << num(left) << "\" y1=\"" << num(py(y)) << "\" x2=\"" << num(right)
        << "\" y2=\"" << num(py(y)) << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << num(left - 6) << "\" y=\"" << num(py(y) + 4)
        << "\" text-anchor=\"end\" font-size=\"11\">" << tick_label(y) << "</text>\n";
  }
  for (double x = std::ceil(xr.lo / xstep) * xstep; x <= xr.hi + xstep * 1e-9; x += xstep) {
    out << "<line x1=\"" << num(px(x)) << "\" y1=\"" << num(bottom) << "\" x2=\"" << num(px(x))
        << "\" y2=\"" << num(bottom + 5) << "\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << num(px(x)) << "\" y=\"" << num(bottom + 18)
        << "\" text-anchor=\"middle\" font-size=\"11\">" << tick_label(x) << "</text>\n";
  }
  out << "<text x=\"" << num((left + right) / 2) << "\" y=\"" << num(bottom + 40)
      << "\" text-anchor=\"middle\" font-size=\"13\">" << xml_escape(chart.x_label) << "</text>\n";
  out << "<text transform=\"translate(" << num(ox + 18) << "," << num((top + bottom) / 2)
      << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"13\">" << xml_escape(chart.y_label)
      << "</text>\n";

  for (std::size_t s = 0; s < chart.series.size(); ++s) {
    const Series& series = chart.series[s];
    const char* color = kPalette[s % kPalette.size()];
    out << "<polyline class=\"series\" data-name=\"" << xml_escape(series.name)
        << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
    const std::size_t n = std::min(series.x.size(), series.y.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(series.x[i]) || !std::isfinite(series.y[i])) continue;
      out << (i ? " " : "") << num(px(series.x[i])) << ',' << num(py(series.y[i]));
    }
    out << "\"/>\n";
    const double ly = top + 16 + 16.0 * static_cast<double>(s);
    out << "<line x1=\"" << num(left + 10) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(left + 30)
        << "\" y2=\"" << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << num(left + 36) << "\" y=\"" << num(ly + 4) << "\" font-size=\"12\">"
        << xml_escape(series.name) << "</text>\n";
  }
  out << "</g>\n";
}

}  // namespace

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
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

std::string render_svg(std::span<const LineChart> charts, int chart_width, int chart_height) {
  std::ostringstream out;
  const int width = chart_width * static_cast<int>(std::max<std::size_t>(charts.size(), 1));
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << chart_height << "\" viewBox=\"0 0 " << width << ' ' << chart_height
      << "\" font-family=\"sans-serif\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < charts.size(); ++i)
    render_chart(out, charts[i], static_cast<double>(i) * chart_width, chart_width, chart_height);
  out << "</svg>\n";
  return out.str();
}

}  // namespace activelab
