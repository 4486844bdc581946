#pragma once

#include <string>
#include <vector>

namespace hglass::app {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> err; // optional symmetric error bars
};

struct ChartRange {
    double x_min = 0.0;
    double x_max = 1.0;
    double y_min = 0.0;
    double y_max = 1.0;
};

/// Padded bounding box of every finite point (and error bar) in `series`.
ChartRange chart_range(const std::vector<Series>& series);

/// Self-contained SVG line chart. Output depends only on the inputs.
std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, const std::vector<Series>& series);

} // namespace hglass::app
