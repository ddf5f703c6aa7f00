#include "gridcast/io/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace gridcast::io {

namespace {

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void include(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (!(hi > lo)) {
            lo -= 1.0;
            hi += 1.0;
        }
        const double margin = 0.05 * (hi - lo);
        lo -= margin;
        hi += margin;
    }
    double scale(double v, double out_lo, double out_hi) const {
        return out_lo + (v - lo) / (hi - lo) * (out_hi - out_lo);
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

} // namespace

std::string svg_line_plot(const std::string& title, const std::vector<PlotSeries>& series,
                          int width, int height) {
    const double ml = 60, mr = 20, mt = 36, mb = 36;
    Range xr, yr;
    for (const auto& s : series) {
        for (double v : s.x) xr.include(v);
        for (double v : s.y) {
            if (std::isfinite(v)) yr.include(v);
        }
    }
    xr.pad();
    yr.pad();

    std::ostringstream svg;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
        << "' viewBox='0 0 " << width << " " << height << "'>\n";
    svg << "<rect width='100%' height='100%' fill='white'/>\n";
    svg << "<text x='" << width / 2 << "' y='20' text-anchor='middle' font-family='sans-serif' "
           "font-size='14'>"
        << title << "</text>\n";

    // Axes.
    svg << "<line x1='" << ml << "' y1='" << height - mb << "' x2='" << width - mr << "' y2='"
        << height - mb << "' stroke='black'/>\n";
    svg << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << height - mb
        << "' stroke='black'/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double v = yr.lo + (yr.hi - yr.lo) * tick / 4.0;
        const double y = yr.scale(v, height - mb, mt);
        svg << "<line x1='" << ml - 4 << "' y1='" << fmt(y) << "' x2='" << ml << "' y2='"
            << fmt(y) << "' stroke='black'/>\n";
        svg << "<text x='" << ml - 8 << "' y='" << fmt(y + 4)
            << "' text-anchor='end' font-family='sans-serif' font-size='10'>" << fmt(v)
            << "</text>\n";
    }

    std::size_t color_at = 0;
    double legend_x = ml + 10;
    for (const auto& s : series) {
        const std::string color = s.color.empty()
                                      ? kPalette[color_at % std::size(kPalette)]
                                      : s.color;
        ++color_at;
        svg << "<polyline fill='none' stroke='" << color << "' stroke-width='1.2' points='";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.y[i])) continue;
            svg << fmt(xr.scale(s.x[i], ml, width - mr)) << ","
                << fmt(yr.scale(s.y[i], height - mb, mt)) << " ";
        }
        svg << "'/>\n";
        svg << "<rect x='" << fmt(legend_x) << "' y='" << mt - 10
            << "' width='10' height='10' fill='" << color << "'/>\n";
        svg << "<text x='" << fmt(legend_x + 14) << "' y='" << mt
            << "' font-family='sans-serif' font-size='11'>" << s.label << "</text>\n";
        legend_x += 14.0 + 7.0 * static_cast<double>(s.label.size()) + 18.0;
    }
    svg << "</svg>\n";
    return svg.str();
}

namespace {

void stem_panel(std::ostringstream& svg, const std::vector<diagnostics::CorrelogramPoint>& pts,
                const std::string& label, double left, double top, double w, double h) {
    Range yr;
    yr.include(0.0);
    for (const auto& p : pts) {
        yr.include(p.value);
        yr.include(p.band);
        yr.include(-p.band);
    }
    yr.include(1.0);
    yr.pad();

    const double x0 = left, x1 = left + w, y0 = top + h, y1 = top;
    auto xpos = [&](int lag) {
        return x0 + (static_cast<double>(lag) + 0.5) / static_cast<double>(pts.size()) * w;
    };
    auto ypos = [&](double v) { return yr.scale(v, y0, y1); };

    svg << "<text x='" << fmt(x0) << "' y='" << fmt(y1 - 6)
        << "' font-family='sans-serif' font-size='12'>" << label << "</text>\n";
    svg << "<line x1='" << fmt(x0) << "' y1='" << fmt(ypos(0.0)) << "' x2='" << fmt(x1)
        << "' y2='" << fmt(ypos(0.0)) << "' stroke='black' stroke-width='0.8'/>\n";
    if (!pts.empty()) {
        const double band = pts.front().band;
        for (double side : {band, -band}) {
            svg << "<line x1='" << fmt(x0) << "' y1='" << fmt(ypos(side)) << "' x2='" << fmt(x1)
                << "' y2='" << fmt(ypos(side))
                << "' stroke='#888888' stroke-dasharray='4 3' stroke-width='0.8'/>\n";
        }
    }
    for (const auto& p : pts) {
        const double x = xpos(p.lag);
        svg << "<line x1='" << fmt(x) << "' y1='" << fmt(ypos(0.0)) << "' x2='" << fmt(x)
            << "' y2='" << fmt(ypos(p.value)) << "' stroke='#1f77b4' stroke-width='2'/>\n";
    }
}

} // namespace

std::string svg_correlogram(const std::string& title,
                            const std::vector<diagnostics::CorrelogramPoint>& acf,
                            const std::vector<diagnostics::CorrelogramPoint>& pacf, int width,
                            int height) {
    std::ostringstream svg;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
        << "' viewBox='0 0 " << width << " " << height << "'>\n";
    svg << "<rect width='100%' height='100%' fill='white'/>\n";
    svg << "<text x='" << width / 2 << "' y='20' text-anchor='middle' font-family='sans-serif' "
           "font-size='14'>"
        << title << "</text>\n";
    const double panel_h = (height - 70) / 2.0;
    stem_panel(svg, acf, "ACF", 50, 40, width - 80.0, panel_h);
    stem_panel(svg, pacf, "PACF", 50, 40 + panel_h + 26, width - 80.0, panel_h);
    svg << "</svg>\n";
    return svg.str();
}

} // namespace gridcast::io
