#pragma once

#include <string>
#include <vector>

namespace srgbm::harness {

/// Minimal line-chart SVG writer; CSV remains the authoritative output.
struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct ChartSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    std::vector<Series> series;
    std::vector<double> vertical_markers;
};

std::string render_line_chart(const ChartSpec& spec);

}  // namespace srgbm::harness
