#ifndef RAMAN_SVG_HPP
#define RAMAN_SVG_HPP

#include <string>
#include <utility>
#include <vector>

namespace raman {

// Best-effort static plots: fixed 800x600 viewBox, no external assets.
// Derived artifacts only; CSV files carry the data of record.

struct SvgSeries {
    std::vector<std::pair<double, double>> points;
    std::string color = "#1f77b4";
    bool dashed = false;
};

struct SvgPanel {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<SvgSeries> series;
};

// Panels stack vertically inside the fixed canvas.
std::string render_svg(const std::vector<SvgPanel>& panels);

}  // namespace raman

#endif  // RAMAN_SVG_HPP
