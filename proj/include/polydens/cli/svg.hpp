#pragma once

// Self-contained SVG line charts for the curve outputs.

#include <string>
#include <vector>

namespace polydens::cli {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = true;
  bool log_y = true;
};

/// Points that cannot be drawn (nonpositive on a log axis, non-finite) are
/// skipped.
std::string line_chart_svg(const ChartSpec& spec, const std::vector<Series>& series);

}  // namespace polydens::cli
