#include "raman/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace raman {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void expand(double v) {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }

    void finish() {
        if (!(lo <= hi)) {
            lo = 0.0;
            hi = 1.0;
        }
        if (lo == hi) {
            lo -= 0.5;
            hi += 0.5;
        }
        const double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    }

    double frac(double v) const { return (v - lo) / (hi - lo); }
};

}  // namespace

std::string render_svg(const std::vector<SvgPanel>& panels) {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" "
           "width=\"800\" height=\"600\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";

    const size_t n = std::max<size_t>(panels.size(), 1);
    const double panel_h = kHeight / static_cast<double>(n);
    for (size_t idx = 0; idx < panels.size(); ++idx) {
        const SvgPanel& panel = panels[idx];
        const double top = panel_h * static_cast<double>(idx);
        const double plot_x0 = 70.0;
        const double plot_x1 = kWidth - 25.0;
        const double plot_y0 = top + 35.0;
        const double plot_y1 = top + panel_h - 45.0;

        Range rx, ry;
        for (const SvgSeries& s : panel.series) {
            for (const auto& [x, y] : s.points) {
                rx.expand(x);
                ry.expand(y);
            }
        }
        rx.finish();
        ry.finish();

        const auto px = [&](double x) { return plot_x0 + rx.frac(x) * (plot_x1 - plot_x0); };
        const auto py = [&](double y) { return plot_y1 - ry.frac(y) * (plot_y1 - plot_y0); };

        out << "<rect x=\"" << num(plot_x0) << "\" y=\"" << num(plot_y0) << "\" width=\""
            << num(plot_x1 - plot_x0) << "\" height=\"" << num(plot_y1 - plot_y0)
            << "\" fill=\"none\" stroke=\"black\"/>\n";
        out << "<text x=\"" << num(0.5 * (plot_x0 + plot_x1)) << "\" y=\"" << num(top + 20.0)
            << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"14\">"
            << panel.title << "</text>\n";
        out << "<text x=\"" << num(0.5 * (plot_x0 + plot_x1)) << "\" y=\""
            << num(plot_y1 + 35.0)
            << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\">"
            << panel.x_label << "</text>\n";
        out << "<text x=\"18\" y=\"" << num(0.5 * (plot_y0 + plot_y1))
            << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\" "
               "transform=\"rotate(-90 18 "
            << num(0.5 * (plot_y0 + plot_y1)) << ")\">" << panel.y_label << "</text>\n";

        for (int tick = 0; tick <= 4; ++tick) {
            const double fx = static_cast<double>(tick) / 4.0;
            const double vx = rx.lo + fx * (rx.hi - rx.lo);
            const double cx = plot_x0 + fx * (plot_x1 - plot_x0);
            out << "<line x1=\"" << num(cx) << "\" y1=\"" << num(plot_y1) << "\" x2=\""
                << num(cx) << "\" y2=\"" << num(plot_y1 + 5.0) << "\" stroke=\"black\"/>\n";
            out << "<text x=\"" << num(cx) << "\" y=\"" << num(plot_y1 + 18.0)
                << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"10\">"
                << num(vx) << "</text>\n";
            const double vy = ry.lo + fx * (ry.hi - ry.lo);
            const double cy = plot_y1 - fx * (plot_y1 - plot_y0);
            out << "<line x1=\"" << num(plot_x0 - 5.0) << "\" y1=\"" << num(cy) << "\" x2=\""
                << num(plot_x0) << "\" y2=\"" << num(cy) << "\" stroke=\"black\"/>\n";
            out << "<text x=\"" << num(plot_x0 - 8.0) << "\" y=\"" << num(cy + 3.0)
                << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"10\">"
                << num(vy) << "</text>\n";
        }

        for (const SvgSeries& s : panel.series) {
            if (s.points.empty()) continue;
            out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.2\"";
            if (s.dashed) out << " stroke-dasharray=\"6 4\"";
            out << " points=\"";
            for (const auto& [x, y] : s.points) {
                out << num(px(x)) << "," << num(py(y)) << " ";
            }
            out << "\"/>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace raman
