#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fairscore/empirical.hpp"

namespace fairscore {

struct PlotSeries {
    std::string label;
    StepCurve curve;
};

struct GapPlot {
    std::string svg;
    double gap_area = 0.0;
};

/// Renders two curves over theta in [0,1] with the band between them shaded.
/// The band area (the exact integral of the gap) is stored in the root
/// element's `data-gap-area` attribute and in the SVG title.
GapPlot render_gap_plot(const std::vector<PlotSeries>& series, std::string_view title = {});

}  // namespace fairscore
