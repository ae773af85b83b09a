#include "polydens/cli/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <iterator>
#include <cmath>
#include <limits>
#include <sstream>

#include "polydens/io.hpp"

namespace polydens::cli {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

// Fixed-precision coordinates keep the output byte-stable.
std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct Axis {
  bool log = false;
  double lo = 0.0, hi = 1.0;

  double map(double v) const { return log ? std::log10(v) : v; }
  bool drawable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
  double frac(double v) const { return (map(v) - lo) / (hi - lo); }
};

Axis fit_axis(bool log, const std::vector<Series>& series, bool use_x) {
  Axis a{log, std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& s : series) {
    const auto& v = use_x ? s.x : s.y;
    for (double x : v) {
      if (!a.drawable(x)) continue;
      a.lo = std::min(a.lo, a.map(x));
      a.hi = std::max(a.hi, a.map(x));
    }
  }
  if (!(a.hi >= a.lo)) a.lo = 0.0, a.hi = 1.0;
  if (a.hi - a.lo < 1e-12) {
    a.lo -= 0.5;
    a.hi += 0.5;
  }
  return a;
}

std::string tick_label(const Axis& a, double t) { return a.log ? "1e" + format_double(std::round(t * 100) / 100) : format_double(t); }

}  // namespace

std::string line_chart_svg(const ChartSpec& spec, const std::vector<Series>& series) {
  const Axis ax = fit_axis(spec.log_x, series, true);
  const Axis ay = fit_axis(spec.log_y, series, false);
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + ax.frac(x) * pw; };
  auto py = [&](double y) { return kTop + (1.0 - ay.frac(y)) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << coord(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(spec.title)
    << "</text>\n";
  o << "<rect x=\"" << coord(kLeft) << "\" y=\"" << coord(kTop) << "\" width=\"" << coord(pw) << "\" height=\""
    << coord(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double tx = ax.lo + (ax.hi - ax.lo) * k / 4.0;
    const double ty = ay.lo + (ay.hi - ay.lo) * k / 4.0;
    const double gx = kLeft + pw * k / 4.0, gy = kTop + ph * (1.0 - k / 4.0);
    o << "<text x=\"" << coord(gx) << "\" y=\"" << coord(kTop + ph + 16) << "\" text-anchor=\"middle\">"
      << tick_label(ax, tx) << "</text>\n";
    o << "<text x=\"" << coord(kLeft - 6) << "\" y=\"" << coord(gy + 4) << "\" text-anchor=\"end\">"
      << tick_label(ay, ty) << "</text>\n";
  }
  o << "<text x=\"" << coord(kLeft + pw / 2) << "\" y=\"" << coord(kHeight - 10) << "\" text-anchor=\"middle\">"
    << escape(spec.x_label) << "</text>\n";
  o << "<text x=\"16\" y=\"" << coord(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << coord(kTop + ph / 2) << ")\">" << escape(spec.y_label) << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % std::size(kColors)];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t k = 0; k < std::min(series[s].x.size(), series[s].y.size()); ++k) {
      const double x = series[s].x[k], y = series[s].y[k];
      if (!ax.drawable(x) || !ay.drawable(y)) continue;
      o << (first ? "" : " ") << coord(px(x)) << "," << coord(py(y));
      first = false;
    }
    o << "\"/>\n";
    o << "<text x=\"" << coord(kLeft + 8) << "\" y=\"" << coord(kTop + 16 + 14 * s) << "\" fill=\"" << color << "\">"
      << escape(series[s].name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace polydens::cli
