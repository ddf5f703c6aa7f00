#pragma once

#include "gridcast/diagnostics/correlogram.hpp"

#include <string>
#include <vector>

namespace gridcast::io {

/// One polyline in a line plot.
struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
};

/// Minimal self-contained SVG line plot: axes, polylines, legend.
std::string svg_line_plot(const std::string& title, const std::vector<PlotSeries>& series,
                          int width = 900, int height = 420);

/// Stem plot of ACF and PACF values with the significance band.
std::string svg_correlogram(const std::string& title,
                            const std::vector<diagnostics::CorrelogramPoint>& acf,
                            const std::vector<diagnostics::CorrelogramPoint>& pacf,
                            int width = 900, int height = 460);

} // namespace gridcast::io
