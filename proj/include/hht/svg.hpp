#pragma once

#include "hht/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace hht {

enum class PlotKind { scatter, line };

inline PlotKind parse_plot_kind(std::string_view name) {
    if (name == "scatter") return PlotKind::scatter;
    if (name == "line") return PlotKind::line;
    throw ConfigError("unknown plot kind (valid: scatter, line)");
}

namespace svg_detail {

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// "nice" tick spacing covering [lo, hi] with ~n intervals
inline double tick_spacing(double lo, double hi, int n) {
    const double span = hi - lo;
    if (!(span > 0.0)) return 1.0;
    const double raw = span / n;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    double nice = 10.0;
    if (frac <= 1.0) nice = 1.0;
    else if (frac <= 2.0) nice = 2.0;
    else if (frac <= 5.0) nice = 5.0;
    return nice * mag;
}

} // namespace svg_detail

// Standalone minimal SVG with axes, ticks and one mark per data point.
// Identical input produces byte-identical output.
inline void write_svg_plot(const std::string& path, const std::vector<double>& x,
                           const std::vector<double>& y, const std::string& x_label,
                           const std::string& y_label, PlotKind kind) {
    if (x.size() != y.size()) throw ConfigError("plot columns differ in length");
    constexpr double width = 900, height = 600;
    constexpr double ml = 70, mr = 20, mt = 20, mb = 50;

    double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
    bool any = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
        if (!any) {
            x_lo = x_hi = x[i];
            y_lo = y_hi = y[i];
            any = true;
        } else {
            x_lo = std::min(x_lo, x[i]);
            x_hi = std::max(x_hi, x[i]);
            y_lo = std::min(y_lo, y[i]);
            y_hi = std::max(y_hi, y[i]);
        }
    }
    if (x_hi <= x_lo) x_hi = x_lo + 1;
    if (y_hi <= y_lo) y_hi = y_lo + 1;

    const double px = (width - ml - mr) / (x_hi - x_lo);
    const double py = (height - mt - mb) / (y_hi - y_lo);
    auto sx = [&](double v) { return ml + (v - x_lo) * px; };
    auto sy = [&](double v) { return height - mb - (v - y_lo) * py; };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file '" + path + "'");
    using svg_detail::num;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

    // axes
    out << "<line x1=\"" << num(ml) << "\" y1=\"" << num(height - mb) << "\" x2=\""
        << num(width - mr) << "\" y2=\"" << num(height - mb)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out << "<line x1=\"" << num(ml) << "\" y1=\"" << num(mt) << "\" x2=\"" << num(ml)
        << "\" y2=\"" << num(height - mb) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";

    const double tx = svg_detail::tick_spacing(x_lo, x_hi, 8);
    for (double v = std::ceil(x_lo / tx) * tx; v <= x_hi + 1e-12 * tx; v += tx) {
        out << "<line x1=\"" << num(sx(v)) << "\" y1=\"" << num(height - mb) << "\" x2=\""
            << num(sx(v)) << "\" y2=\"" << num(height - mb + 5)
            << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << num(sx(v)) << "\" y=\"" << num(height - mb + 18)
            << "\" font-size=\"11\" text-anchor=\"middle\">" << num(v) << "</text>\n";
    }
    const double ty = svg_detail::tick_spacing(y_lo, y_hi, 6);
    for (double v = std::ceil(y_lo / ty) * ty; v <= y_hi + 1e-12 * ty; v += ty) {
        out << "<line x1=\"" << num(ml - 5) << "\" y1=\"" << num(sy(v)) << "\" x2=\"" << num(ml)
            << "\" y2=\"" << num(sy(v)) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << num(ml - 8) << "\" y=\"" << num(sy(v) + 4)
            << "\" font-size=\"11\" text-anchor=\"end\">" << num(v) << "</text>\n";
    }

    out << "<text x=\"" << num(ml + (width - ml - mr) / 2) << "\" y=\"" << num(height - 10)
        << "\" font-size=\"13\" text-anchor=\"middle\">" << x_label << "</text>\n";
    out << "<text x=\"15\" y=\"" << num(mt + (height - mt - mb) / 2)
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
        << num(mt + (height - mt - mb) / 2) << ")\">" << y_label << "</text>\n";

    if (kind == PlotKind::line) {
        out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1\" points=\"";
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
            out << num(sx(x[i])) << ',' << num(sy(y[i])) << ' ';
        }
        out << "\"/>\n";
    } else {
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
            out << "<circle cx=\"" << num(sx(x[i])) << "\" cy=\"" << num(sy(y[i]))
                << "\" r=\"1.2\" fill=\"#1f77b4\"/>\n";
        }
    }
    out << "</svg>\n";
}

} // namespace hht
