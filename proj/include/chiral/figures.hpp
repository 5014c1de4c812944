#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace chiral {

struct LineSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// Self-contained SVG line plot with axes, ticks and a legend.
std::string svg_line_plot(const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::vector<LineSeries>& series);

// Space-time heatmap: one column per time, one row per site (site 1 at the
// bottom). values is n_times x n_sites.
std::string svg_heatmap(const std::string& title, const std::string& x_label,
                        const std::string& y_label, const std::vector<double>& times,
                        const Eigen::MatrixXd& values);

}  // namespace chiral
