#ifndef GRAPHON_PLOTS_HPP
#define GRAPHON_PLOTS_HPP

#include <string>
#include <vector>

#include "graphon/io.hpp"

namespace graphon {

/// One polyline; color is any SVG color string.
struct PlotSeries {
    std::string label;
    std::string color;
    std::vector<double> x;
    std::vector<double> y;
    // Optional band half-widths around y (confidence intervals).
    std::vector<double> band;
};

/// Deterministic standalone SVG: identical input gives byte-identical output.
/// Empty input renders empty axes and returns normally.
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series);

// Renderers for the emitted CSV schemas. Each returns the output path list so
// callers can add the files to the run manifest.

std::vector<std::string> plot_trajectory(const CsvTable& traj, const std::string& out_prefix);
std::vector<std::string> plot_train_report(const CsvTable& report, const std::string& out_prefix);
std::vector<std::string> plot_utilities(const CsvTable& utilities, const std::string& out_prefix);
std::vector<std::string> plot_metrics(const CsvTable& metrics, const std::string& out_prefix);

}  // namespace graphon

#endif
