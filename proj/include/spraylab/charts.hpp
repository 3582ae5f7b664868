#pragma once

#include <string>
#include <vector>

namespace spraylab {

struct ChartSeries {
    std::string name;
    std::vector<double> values;  // one per group; NaN renders as "n/a"
};

/// Grouped-bar chart as a standalone SVG document. Groups along the x
/// axis, one bar per series inside each group.
std::string grouped_bar_svg(const std::string& title, const std::vector<std::string>& groups,
                            const std::vector<ChartSeries>& series);

void write_grouped_bar_svg(const std::string& path, const std::string& title,
                           const std::vector<std::string>& groups,
                           const std::vector<ChartSeries>& series);

} // namespace spraylab
