#include "chiral/figures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "chiral/errors.hpp"

namespace chiral {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 80, kRight = 30, kTop = 46, kBottom = 58;
constexpr double kPlotW = kWidth - kLeft - kRight;
constexpr double kPlotH = kHeight - kTop - kBottom;

const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#000000", "#ff7f0e", "#9467bd"};

std::string fmt(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.4g", v);
    return buffer;
}

struct Range {
    double lo = 0.0, hi = 1.0;
    double map(double v, double pixel_lo, double pixel_hi) const {
        const double span = hi - lo;
        const double unit = span > 0.0 ? (v - lo) / span : 0.5;
        return pixel_lo + unit * (pixel_hi - pixel_lo);
    }
};

Range padded_range(double lo, double hi) {
    if (!(hi > lo)) {
        const double pad = std::max(1.0, std::abs(lo)) * 0.1;
        return {lo - pad, hi + pad};
    }
    const double pad = (hi - lo) * 0.05;
    return {lo - pad, hi + pad};
}

void axes(std::ostringstream& svg, const std::string& title, const std::string& x_label,
          const std::string& y_label, const Range& xr, const Range& yr) {
    svg << "<rect x='" << kLeft << "' y='" << kTop << "' width='" << kPlotW << "' height='"
        << kPlotH << "' fill='none' stroke='black'/>\n";
    svg << "<text x='" << kWidth / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title
        << "</text>\n";
    svg << "<text x='" << kLeft + kPlotW / 2 << "' y='" << kHeight - 14
        << "' text-anchor='middle' font-size='13'>" << x_label << "</text>\n";
    svg << "<text x='20' y='" << kTop + kPlotH / 2
        << "' text-anchor='middle' font-size='13' transform='rotate(-90 20 " << kTop + kPlotH / 2
        << ")'>" << y_label << "</text>\n";
    for (int k = 0; k <= 5; ++k) {
        const double fx = xr.lo + (xr.hi - xr.lo) * k / 5.0;
        const double px = xr.map(fx, kLeft, kLeft + kPlotW);
        svg << "<line x1='" << px << "' y1='" << kTop + kPlotH << "' x2='" << px << "' y2='"
            << kTop + kPlotH + 5 << "' stroke='black'/>\n";
        svg << "<text x='" << px << "' y='" << kTop + kPlotH + 20
            << "' text-anchor='middle' font-size='11'>" << fmt(fx) << "</text>\n";
        const double fy = yr.lo + (yr.hi - yr.lo) * k / 5.0;
        const double py = yr.map(fy, kTop + kPlotH, kTop);
        svg << "<line x1='" << kLeft - 5 << "' y1='" << py << "' x2='" << kLeft << "' y2='" << py
            << "' stroke='black'/>\n";
        svg << "<text x='" << kLeft - 8 << "' y='" << py + 4
            << "' text-anchor='end' font-size='11'>" << fmt(fy) << "</text>\n";
    }
}

// Dark-violet to light-yellow ramp.
void colormap(double unit, int& r, int& g, int& b) {
    static constexpr int stops[6][3] = {{0, 0, 4},      {59, 15, 112},  {140, 41, 129},
                                        {221, 73, 104}, {252, 155, 83}, {252, 253, 191}};
    unit = std::clamp(unit, 0.0, 1.0);
    const double pos = unit * 5.0;
    const int k = std::min(4, static_cast<int>(pos));
    const double frac = pos - k;
    r = static_cast<int>(std::lround(stops[k][0] + frac * (stops[k + 1][0] - stops[k][0])));
    g = static_cast<int>(std::lround(stops[k][1] + frac * (stops[k + 1][1] - stops[k][1])));
    b = static_cast<int>(std::lround(stops[k][2] + frac * (stops[k + 1][2] - stops[k][2])));
}

}  // namespace

std::string svg_line_plot(const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::vector<LineSeries>& series) {
    if (series.empty()) throw ValidationError("line plot needs at least one series");

    double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;
    bool first = true;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size())
            throw ValidationError("line series '" + s.label + "' has mismatched lengths");
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            if (first) {
                x_lo = x_hi = s.x[k];
                y_lo = y_hi = s.y[k];
                first = false;
            }
            x_lo = std::min(x_lo, s.x[k]);
            x_hi = std::max(x_hi, s.x[k]);
            y_lo = std::min(y_lo, s.y[k]);
            y_hi = std::max(y_hi, s.y[k]);
        }
    }
    if (first) throw ValidationError("line plot has no data points");
    const Range xr{x_lo, x_hi};
    const Range yr = padded_range(y_lo, y_hi);

    std::ostringstream svg;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='" << kHeight
        << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
    axes(svg, title, x_label, y_label, xr, yr);

    for (std::size_t idx = 0; idx < series.size(); ++idx) {
        const auto& s = series[idx];
        const char* color = kPalette[idx % 6];
        svg << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
        for (std::size_t k = 0; k < s.x.size(); ++k)
            svg << xr.map(s.x[k], kLeft, kLeft + kPlotW) << ","
                << yr.map(s.y[k], kTop + kPlotH, kTop) << " ";
        svg << "'/>\n";
        const double ly = kTop + 16 + 16 * static_cast<double>(idx);
        svg << "<line x1='" << kLeft + kPlotW - 150 << "' y1='" << ly << "' x2='"
            << kLeft + kPlotW - 120 << "' y2='" << ly << "' stroke='" << color
            << "' stroke-width='2'/>\n";
        svg << "<text x='" << kLeft + kPlotW - 114 << "' y='" << ly + 4 << "' font-size='11'>"
            << s.label << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string svg_heatmap(const std::string& title, const std::string& x_label,
                        const std::string& y_label, const std::vector<double>& times,
                        const Eigen::MatrixXd& values) {
    if (times.empty() || static_cast<Eigen::Index>(times.size()) != values.rows())
        throw ValidationError("heatmap needs one row of values per time");
    const Eigen::Index n_sites = values.cols();
    if (n_sites < 1) throw ValidationError("heatmap needs at least one site");

    const double peak = std::max(values.maxCoeff(), 1e-300);

    // Keep the SVG small: merge adjacent time columns beyond 240.
    const std::size_t max_cols = 240;
    const std::size_t stride = (times.size() + max_cols - 1) / max_cols;
    const std::size_t n_cols = (times.size() + stride - 1) / stride;

    std::ostringstream svg;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='" << kHeight
        << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
    const Range xr{times.front(), times.back()};
    const Range yr{0.5, static_cast<double>(n_sites) + 0.5};
    axes(svg, title, x_label, y_label, xr, yr);

    const double cell_w = kPlotW / static_cast<double>(n_cols);
    const double cell_h = kPlotH / static_cast<double>(n_sites);
    for (std::size_t col = 0; col < n_cols; ++col) {
        const std::size_t begin = col * stride;
        const std::size_t end = std::min(times.size(), begin + stride);
        for (Eigen::Index m = 0; m < n_sites; ++m) {
            double acc = 0.0;
            for (std::size_t k = begin; k < end; ++k)
                acc += values(static_cast<Eigen::Index>(k), m);
            acc /= static_cast<double>(end - begin);
            int r, g, b;
            colormap(acc / peak, r, g, b);
            const double x = kLeft + cell_w * static_cast<double>(col);
            const double y = kTop + kPlotH - cell_h * static_cast<double>(m + 1);
            svg << "<rect x='" << x << "' y='" << y << "' width='" << cell_w + 0.5
                << "' height='" << cell_h + 0.5 << "' fill='rgb(" << r << "," << g << "," << b
                << ")'/>\n";
        }
    }
    svg << "<text x='" << kLeft + kPlotW - 4 << "' y='" << kTop - 6
        << "' text-anchor='end' font-size='11'>peak " << fmt(peak) << "</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace chiral
