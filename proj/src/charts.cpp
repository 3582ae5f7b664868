#include "spraylab/charts.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "spraylab/error.hpp"
#include "spraylab/text.hpp"

namespace spraylab {

namespace {

const char* kPalette[] = {"#4878a8", "#e08214", "#5aae61", "#9970ab", "#c51b7d", "#666666"};

double nice_ceiling(double v) {
    if (v <= 0.0) return 1.0;
    double mag = std::pow(10.0, std::floor(std::log10(v)));
    for (double step : {1.0, 1.25, 1.5, 2.0, 2.5, 4.0, 5.0, 7.5, 10.0})
        if (v <= step * mag) return step * mag;
    return 10.0 * mag;
}

std::string tick_label(double v) {
    if (v == 0.0) return "0";
    if (std::abs(v) >= 1000.0) return format_fixed(v, 0);
    if (std::abs(v) >= 1.0) return shortest_repr(std::round(v * 100.0) / 100.0);
    return shortest_repr(std::round(v * 10000.0) / 10000.0);
}

} // namespace

std::string grouped_bar_svg(const std::string& title, const std::vector<std::string>& groups,
                            const std::vector<ChartSeries>& series) {
    if (groups.empty() || series.empty())
        throw ValidationError("chart: need at least one group and one series");
    for (const auto& s : series)
        if (s.values.size() != groups.size())
            throw ValidationError("chart: series '" + s.name + "' has " +
                                  std::to_string(s.values.size()) + " values for " +
                                  std::to_string(groups.size()) + " groups");

    const double width = 640, height = 420;
    const double left = 70, right = 20, top = 50, bottom = 50;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double max_val = 0.0;
    for (const auto& s : series)
        for (double v : s.values)
            if (std::isfinite(v)) max_val = std::max(max_val, v);
    double y_max = nice_ceiling(max_val * 1.1);

    auto y_of = [&](double v) { return top + plot_h * (1.0 - v / y_max); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

    const int n_ticks = 5;
    for (int i = 0; i <= n_ticks; ++i) {
        double v = y_max * i / n_ticks;
        double y = y_of(v);
        svg << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << width - right
            << "\" y2=\"" << y << "\" stroke=\"#dddddd\"/>\n";
        svg << "<text x=\"" << left - 6 << "\" y=\"" << y + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << tick_label(v) << "</text>\n";
    }

    const double group_w = plot_w / groups.size();
    const double bar_gap = 4.0;
    const double bar_w =
        std::max(4.0, (group_w * 0.8 - bar_gap * (series.size() - 1)) / series.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
        double gx = left + group_w * g + group_w * 0.1;
        for (std::size_t s = 0; s < series.size(); ++s) {
            double x = gx + s * (bar_w + bar_gap);
            double v = series[s].values[g];
            const char* color = kPalette[s % (sizeof kPalette / sizeof *kPalette)];
            if (std::isfinite(v)) {
                double y = y_of(v);
                svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << bar_w
                    << "\" height=\"" << (top + plot_h - y) << "\" fill=\"" << color << "\"/>\n";
                svg << "<text x=\"" << x + bar_w / 2 << "\" y=\"" << y - 4
                    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"9\">"
                    << format_fixed(v, v < 10 ? 4 : 1) << "</text>\n";
            } else {
                svg << "<text x=\"" << x + bar_w / 2 << "\" y=\"" << y_of(0) - 6
                    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"9\">"
                    << "n/a</text>\n";
            }
        }
        svg << "<text x=\"" << left + group_w * g + group_w / 2 << "\" y=\""
            << height - bottom + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
            << groups[g] << "</text>\n";
    }

    svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << top + plot_h << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << width - right
        << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";

    double lx = left + 8, ly = top + 6;
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % (sizeof kPalette / sizeof *kPalette)];
        svg << "<rect x=\"" << lx << "\" y=\"" << ly + s * 16 << "\" width=\"10\" height=\"10\" "
            << "fill=\"" << color << "\"/>\n";
        svg << "<text x=\"" << lx + 14 << "\" y=\"" << ly + s * 16 + 9
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << series[s].name
            << "</text>\n";
    }

    svg << "</svg>\n";
    return svg.str();
}

void write_grouped_bar_svg(const std::string& path, const std::string& title,
                           const std::vector<std::string>& groups,
                           const std::vector<ChartSeries>& series) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open chart file: " + path);
    out << grouped_bar_svg(title, groups, series);
    if (!out) throw std::runtime_error("chart write failed: " + path);
}

} // namespace spraylab
