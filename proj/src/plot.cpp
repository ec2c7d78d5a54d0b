#include "fairscore/plot.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <sstream>

#include "fairscore/error.hpp"

namespace fairscore {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 600.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 360.0;

double px(double theta) { return kLeft + theta * (kRight - kLeft); }
double py(double value) { return kBottom - std::clamp(value, 0.0, 1.0) * (kBottom - kTop); }

std::string num(double v) {
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.3f", v);
    return buf.data();
}

std::string escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string step_points(const StepCurve& c) {
    std::ostringstream pts;
    const auto& b = c.breakpoints();
    const auto& v = c.values();
    pts << num(px(0.0)) << ',' << num(py(v[0]));
    for (std::size_t i = 0; i < b.size(); ++i) {
        pts << ' ' << num(px(b[i])) << ',' << num(py(v[i])) << ' ' << num(px(b[i])) << ','
            << num(py(v[i + 1]));
    }
    pts << ' ' << num(px(1.0)) << ',' << num(py(v.back()));
    return pts.str();
}

}  // namespace

GapPlot render_gap_plot(const std::vector<PlotSeries>& series, std::string_view title) {
    if (series.size() != 2) {
        throw Error(ErrorCode::InvalidArgument, "a gap plot needs exactly two curves");
    }
    const StepCurve& f = series[0].curve;
    const StepCurve& g = series[1].curve;
    GapPlot plot;
    plot.gap_area = integrate_abs_difference(f, g);

    std::vector<double> grid{0.0};
    std::merge(f.breakpoints().begin(), f.breakpoints().end(), g.breakpoints().begin(),
               g.breakpoints().end(), std::back_inserter(grid));
    grid.push_back(1.0);
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::ostringstream band;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double a = f(grid[i]);
        const double b = g(grid[i]);
        if (a == b) continue;
        band << 'M' << num(px(grid[i - 1])) << ' ' << num(py(a)) << 'H' << num(px(grid[i]))
             << 'V' << num(py(b)) << 'H' << num(px(grid[i - 1])) << 'Z';
    }

    const std::string area = format_double(plot.gap_area);
    const std::string heading =
        (title.empty() ? std::string("threshold gap") : std::string(title)) + " (gap area = " +
        area + ")";
    static constexpr std::array<const char*, 2> colors{"#d62728", "#1f77b4"};

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" data-gap-area=\""
        << area << "\">\n";
    svg << "  <title>" << escape(heading) << "</title>\n";
    svg << "  <rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" fill=\"white\"/>\n";
    svg << "  <text x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"14\">"
        << escape(heading) << "</text>\n";
    // Axes with ticks every 0.2.
    svg << "  <g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
    svg << "    <line x1=\"" << num(kLeft) << "\" y1=\"" << num(kBottom) << "\" x2=\"" << num(kRight)
        << "\" y2=\"" << num(kBottom) << "\"/>\n";
    svg << "    <line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft)
        << "\" y2=\"" << num(kBottom) << "\"/>\n";
    svg << "  </g>\n";
    svg << "  <g font-family=\"sans-serif\" font-size=\"10\">\n";
    for (int i = 0; i <= 5; ++i) {
        const double t = i / 5.0;
        svg << "    <text x=\"" << num(px(t)) << "\" y=\"" << num(kBottom + 14)
            << "\" text-anchor=\"middle\">" << num(t).substr(0, 3) << "</text>\n";
        svg << "    <text x=\"" << num(kLeft - 6) << "\" y=\"" << num(py(t) + 3)
            << "\" text-anchor=\"end\">" << num(t).substr(0, 3) << "</text>\n";
    }
    svg << "    <text x=\"" << num((kLeft + kRight) / 2) << "\" y=\"" << num(kBottom + 30)
        << "\" text-anchor=\"middle\">threshold</text>\n";
    svg << "  </g>\n";
    svg << "  <path class=\"gap-band\" d=\"" << band.str()
        << "\" fill=\"#9467bd\" fill-opacity=\"0.35\" stroke=\"none\"/>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        svg << "  <polyline class=\"curve\" fill=\"none\" stroke=\"" << colors[s]
            << "\" stroke-width=\"1.5\" points=\"" << step_points(series[s].curve) << "\"/>\n";
        svg << "  <text x=\"" << num(kRight - 150) << "\" y=\"" << num(kTop + 14 + 14.0 * s)
            << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << colors[s] << "\">"
            << escape(series[s].label) << "</text>\n";
    }
    svg << "</svg>\n";
    plot.svg = svg.str();
    return plot;
}

}  // namespace fairscore
