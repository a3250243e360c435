#include "entrovol/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace entrovol {

namespace {

constexpr double kWidth = 860.0;
constexpr double kHeight = 560.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 830.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 500.0;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

struct Range {
    double lo, hi;
    double to_px(double v, double px_lo, double px_hi) const {
        return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo);
    }
};

Range padded(double lo, double hi) {
    if (lo > hi) std::swap(lo, hi);
    double pad = (hi - lo) * 0.1;
    if (pad == 0.0) pad = std::max(std::abs(lo) * 0.1, 1e-3);
    return {lo - pad, hi + pad};
}

}  // namespace

std::string selection_scatter_svg(const SelectionReport& report, std::size_t top_k) {
    const std::vector<BetaRecord> points = top_k_least_risky(report, std::max<std::size_t>(top_k, 1));

    double x_lo = report.index_ror_pct, x_hi = report.index_ror_pct;
    double y_lo = report.index_beta, y_hi = report.index_beta;
    for (const auto& p : points) {
        x_lo = std::min(x_lo, p.ror_pct);
        x_hi = std::max(x_hi, p.ror_pct);
        y_lo = std::min(y_lo, p.beta);
        y_hi = std::max(y_hi, p.beta);
    }
    const Range xr = padded(x_lo, x_hi);
    const Range yr = padded(y_lo, y_hi);

    auto px = [&](double v) { return xr.to_px(v, kLeft, kRight); };
    // y grows downward in SVG space.
    auto py = [&](double v) { return yr.to_px(v, kBottom, kTop); };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) +
           "\" height=\"" + fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " +
           fmt(kHeight) + "\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) +
           "\" fill=\"white\"/>\n";

    // Axes.
    svg += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kBottom) + "\" x2=\"" + fmt(kRight) +
           "\" y2=\"" + fmt(kBottom) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kTop) + "\" x2=\"" + fmt(kLeft) +
           "\" y2=\"" + fmt(kBottom) + "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = xr.lo + (xr.hi - xr.lo) * i / 4.0;
        const double yv = yr.lo + (yr.hi - yr.lo) * i / 4.0;
        svg += "<text x=\"" + fmt(px(xv)) + "\" y=\"" + fmt(kBottom + 18.0) +
               "\" font-size=\"11\" text-anchor=\"middle\">" + fmt_tick(xv) + "</text>\n";
        svg += "<text x=\"" + fmt(kLeft - 8.0) + "\" y=\"" + fmt(py(yv) + 4.0) +
               "\" font-size=\"11\" text-anchor=\"end\">" + fmt_tick(yv) + "</text>\n";
    }
    svg += "<text x=\"" + fmt((kLeft + kRight) / 2.0) + "\" y=\"" + fmt(kHeight - 16.0) +
           "\" font-size=\"13\" text-anchor=\"middle\">rate of return (%)</text>\n";
    svg += "<text x=\"18\" y=\"" + fmt((kTop + kBottom) / 2.0) +
           "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
           fmt((kTop + kBottom) / 2.0) + ")\">beta</text>\n";

    // Index reference lines.
    svg += "<line x1=\"" + fmt(px(report.index_ror_pct)) + "\" y1=\"" + fmt(kTop) +
           "\" x2=\"" + fmt(px(report.index_ror_pct)) + "\" y2=\"" + fmt(kBottom) +
           "\" stroke=\"red\" stroke-dasharray=\"5,3\"/>\n";
    svg += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(py(report.index_beta)) +
           "\" x2=\"" + fmt(kRight) + "\" y2=\"" + fmt(py(report.index_beta)) +
           "\" stroke=\"red\" stroke-dasharray=\"5,3\"/>\n";
    svg += "<text x=\"" + fmt(px(report.index_ror_pct) + 4.0) + "\" y=\"" + fmt(kTop + 12.0) +
           "\" font-size=\"11\" fill=\"red\">" + report.index_name + " RoR " +
           format_ror(report.index_ror_pct) + "%</text>\n";
    svg += "<text x=\"" + fmt(kRight - 4.0) + "\" y=\"" + fmt(py(report.index_beta) - 6.0) +
           "\" font-size=\"11\" fill=\"red\" text-anchor=\"end\">" + report.index_name +
           " beta " + format_beta(report.index_beta) + "</text>\n";

    // Members.
    for (const auto& p : points) {
        svg += "<circle cx=\"" + fmt(px(p.ror_pct)) + "\" cy=\"" + fmt(py(p.beta)) +
               "\" r=\"4\" fill=\"steelblue\"/>\n";
        svg += "<text x=\"" + fmt(px(p.ror_pct) + 6.0) + "\" y=\"" + fmt(py(p.beta) - 6.0) +
               "\" font-size=\"10\">" + p.subject + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace entrovol
