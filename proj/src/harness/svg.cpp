#include "srgbm/harness/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace srgbm::harness {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 64.0;
constexpr double kRight = 20.0;
constexpr double kTop = 36.0;
constexpr double kBottom = 48.0;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    bool log = false;

    double place(double v, double pixel_lo, double pixel_hi) const {
        double t = log ? (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo))
                       : (v - lo) / (hi - lo);
        return pixel_lo + t * (pixel_hi - pixel_lo);
    }
};

bool usable(double v, bool log_axis) {
    return std::isfinite(v) && (!log_axis || v > 0.0);
}

Axis fit_axis(const ChartSpec& spec, bool y_axis) {
    Axis axis;
    axis.log = y_axis ? spec.log_y : spec.log_x;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const Series& s : spec.series) {
        const auto& vals = y_axis ? s.y : s.x;
        const auto& other = y_axis ? s.x : s.y;
        for (std::size_t i = 0; i < vals.size(); ++i) {
            if (!usable(vals[i], axis.log)) continue;
            if (i < other.size() && !usable(other[i], y_axis ? spec.log_x : spec.log_y)) {
                continue;
            }
            lo = std::min(lo, vals[i]);
            hi = std::max(hi, vals[i]);
        }
    }
    if (!y_axis) {
        for (const double v : spec.vertical_markers) {
            if (usable(v, axis.log)) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
    }
    if (!(lo <= hi)) {
        lo = axis.log ? 0.1 : 0.0;
        hi = 1.0;
    }
    if (lo == hi) {
        lo = axis.log ? lo / 2.0 : lo - 1.0;
        hi = axis.log ? hi * 2.0 : hi + 1.0;
    }
    if (!axis.log) {
        const double pad = 0.04 * (hi - lo);
        lo -= pad;
        hi += pad;
    } else {
        lo /= 1.3;
        hi *= 1.3;
    }
    axis.lo = lo;
    axis.hi = hi;
    return axis;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::vector<double> ticks_for(const Axis& axis) {
    std::vector<double> ticks;
    if (axis.log) {
        const int d_lo = static_cast<int>(std::ceil(std::log10(axis.lo)));
        const int d_hi = static_cast<int>(std::floor(std::log10(axis.hi)));
        for (int d = d_lo; d <= d_hi; ++d) ticks.push_back(std::pow(10.0, d));
        if (ticks.empty()) ticks = {axis.lo, axis.hi};
        return ticks;
    }
    const double span = axis.hi - axis.lo;
    double step = std::pow(10.0, std::floor(std::log10(span / 5.0)));
    if (span / step > 10.0) step *= 2.0;
    if (span / step > 10.0) step *= 2.5;
    for (double v = std::ceil(axis.lo / step) * step; v <= axis.hi + 1e-12 * span; v += step) {
        ticks.push_back(v);
    }
    return ticks;
}

}  // namespace

std::string render_line_chart(const ChartSpec& spec) {
    const Axis xa = fit_axis(spec, false);
    const Axis ya = fit_axis(spec, true);
    const double px_lo = kLeft, px_hi = kWidth - kRight;
    const double py_lo = kHeight - kBottom, py_hi = kTop;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"14\">" << spec.title << "</text>\n";

    // axes frame
    svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << px_hi - px_lo
        << "\" height=\"" << py_lo - py_hi
        << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";

    for (const double v : ticks_for(xa)) {
        const double px = xa.place(v, px_lo, px_hi);
        svg << "<line x1=\"" << px << "\" y1=\"" << py_lo << "\" x2=\"" << px << "\" y2=\""
            << py_lo + 4 << "\" stroke=\"#444\"/>\n";
        svg << "<text x=\"" << px << "\" y=\"" << py_lo + 16
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
            << fmt(v) << "</text>\n";
    }
    for (const double v : ticks_for(ya)) {
        const double py = ya.place(v, py_lo, py_hi);
        svg << "<line x1=\"" << px_lo - 4 << "\" y1=\"" << py << "\" x2=\"" << px_lo
            << "\" y2=\"" << py << "\" stroke=\"#444\"/>\n";
        svg << "<text x=\"" << px_lo - 6 << "\" y=\"" << py + 3
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << fmt(v)
            << "</text>\n";
    }
    svg << "<text x=\"" << (px_lo + px_hi) / 2 << "\" y=\"" << kHeight - 10
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << spec.x_label << "</text>\n";
    svg << "<text x=\"14\" y=\"" << (py_lo + py_hi) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        << "transform=\"rotate(-90 14 " << (py_lo + py_hi) / 2 << ")\">" << spec.y_label
        << "</text>\n";

    for (const double v : spec.vertical_markers) {
        if (!usable(v, xa.log)) continue;
        const double px = xa.place(v, px_lo, px_hi);
        svg << "<line x1=\"" << px << "\" y1=\"" << py_hi << "\" x2=\"" << px << "\" y2=\""
            << py_lo << "\" stroke=\"#999\" stroke-dasharray=\"5,4\"/>\n";
    }

    int color_idx = 0;
    double legend_y = kTop + 14;
    for (const Series& s : spec.series) {
        const char* color = kPalette[color_idx % 8];
        ++color_idx;
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        bool pen_down = false;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!usable(s.x[i], xa.log) || !usable(s.y[i], ya.log)) {
                pen_down = false;
                continue;
            }
            (void)pen_down;
            svg << xa.place(s.x[i], px_lo, px_hi) << "," << ya.place(s.y[i], py_lo, py_hi)
                << " ";
            pen_down = true;
        }
        svg << "\"/>\n";
        if (!s.label.empty()) {
            svg << "<line x1=\"" << px_hi - 120 << "\" y1=\"" << legend_y << "\" x2=\""
                << px_hi - 100 << "\" y2=\"" << legend_y << "\" stroke=\"" << color
                << "\" stroke-width=\"2\"/>\n";
            svg << "<text x=\"" << px_hi - 94 << "\" y=\"" << legend_y + 3
                << "\" font-family=\"sans-serif\" font-size=\"10\">" << s.label
                << "</text>\n";
            legend_y += 14;
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace srgbm::harness
