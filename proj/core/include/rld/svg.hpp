#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace rld::io {

/// Static plot description for the internal SVG writer. One Plot renders to
/// one self-contained SVG file: fixed canvas, linear axes with tick labels,
/// and either polylines or dot clouds per series. Output is deterministic,
/// no timestamps or generated ids.
struct PlotSeries {
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f6fb2";
    bool dots = false;      ///< scatter when true, polyline otherwise
    double dot_radius = 1.2;
};

struct Plot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
    int width = 920;
    int height = 560;
};

[[nodiscard]] std::string render_svg(const Plot& plot);

/// render_svg to a file; throws IoError on filesystem failure.
void write_svg(const std::filesystem::path& path, const Plot& plot);

} // namespace rld::io
