#pragma once

#include <string>
#include <vector>

namespace compass::experiments {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Self-contained SVG line chart, 720x440. Series with a single point, or
/// scatter = true, render as markers only.
std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label,
                       const std::vector<Series>& series, bool scatter = false);

/// Horizontal bar chart for labeled scalar values (with optional error bars,
/// pass half_widths empty to skip).
std::string bar_chart(const std::string& title, const std::string& x_label,
                      const std::vector<std::string>& labels,
                      const std::vector<double>& values,
                      const std::vector<double>& half_widths);

}  // namespace compass::experiments
