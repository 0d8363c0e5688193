#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "jamrx/csv.hpp"

namespace jamrx {

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

struct ChartOptions {
    std::string title;
    std::string x_label = "x";
    std::string y_label = "y";
    bool log_x = false;
    int width = 900;
    int height = 560;
};

namespace detail {

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

/// Round a span to a "nice" tick step (1/2/5 times a power of ten).
inline double nice_step(double span, int target_ticks) {
    const double raw = span / std::max(target_ticks, 1);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double r = raw / mag;
    if (r < 1.5) return mag;
    if (r < 3.5) return 2.0 * mag;
    if (r < 7.5) return 5.0 * mag;
    return 10.0 * mag;
}

inline const char* series_color(std::size_t i) {
    static constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                              "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
                                              "#bcbd22", "#e377c2"};
    return palette[i % (sizeof(palette) / sizeof(palette[0]))];
}

}  // namespace detail

/// Self-contained SVG line chart: axes, ticks, one polyline per series, and a
/// legend. No external assets or stylesheets.
inline void emit_svg_chart(const std::vector<Series>& series, const std::string& path,
                           const ChartOptions& opts = {}) {
    if (series.empty()) {
        throw std::invalid_argument("emit_svg_chart: no series");
    }
    for (const Series& s : series) {
        if (s.points.empty()) {
            throw std::invalid_argument("emit_svg_chart: zero-length series '" + s.label + "'");
        }
    }
    auto xval = [&](double x) {
        if (!opts.log_x) return x;
        if (!(x > 0.0)) throw std::invalid_argument("emit_svg_chart: log axis needs x > 0");
        return std::log10(x);
    };
    double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
    for (const Series& s : series) {
        for (const auto& [x, y] : s.points) {
            x_min = std::min(x_min, xval(x));
            x_max = std::max(x_max, xval(x));
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    }
    if (x_max <= x_min) x_max = x_min + 1.0;
    if (y_max <= y_min) y_max = y_min + 1.0;
    const double y_pad = 0.05 * (y_max - y_min);
    y_min -= y_pad;
    y_max += y_pad;

    const double ml = 70, mr = 170, mt = 40, mb = 55;
    const double pw = opts.width - ml - mr;
    const double ph = opts.height - mt - mb;
    auto sx = [&](double x) { return ml + (xval(x) - x_min) / (x_max - x_min) * pw; };
    auto sy = [&](double y) { return mt + (y_max - y) / (y_max - y_min) * ph; };

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("emit_svg_chart: cannot open " + path + " for writing");
    }
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\""
        << opts.height << "\" viewBox=\"0 0 " << opts.width << " " << opts.height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!opts.title.empty()) {
        out << "<text x=\"" << ml + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"16\">" << opts.title << "</text>\n";
    }

    // Frame and ticks.
    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    const double ystep = detail::nice_step(y_max - y_min, 6);
    for (double t = std::ceil(y_min / ystep) * ystep; t <= y_max + 1e-12; t += ystep) {
        out << "<line x1=\"" << ml << "\" y1=\"" << sy(t) << "\" x2=\"" << ml + pw << "\" y2=\""
            << sy(t) << "\" stroke=\"#dddddd\"/>\n"
            << "<text x=\"" << ml - 8 << "\" y=\"" << sy(t) + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << detail::fmt(t) << "</text>\n";
    }
    if (opts.log_x) {
        for (double d = std::floor(x_min); d <= std::ceil(x_max) + 1e-12; d += 1.0) {
            if (d < x_min - 1e-9 || d > x_max + 1e-9) continue;
            const double px = ml + (d - x_min) / (x_max - x_min) * pw;
            out << "<line x1=\"" << px << "\" y1=\"" << mt << "\" x2=\"" << px << "\" y2=\""
                << mt + ph << "\" stroke=\"#dddddd\"/>\n"
                << "<text x=\"" << px << "\" y=\"" << mt + ph + 18
                << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
                << detail::fmt(std::pow(10.0, d)) << "</text>\n";
        }
    } else {
        const double xstep = detail::nice_step(x_max - x_min, 7);
        for (double t = std::ceil(x_min / xstep) * xstep; t <= x_max + 1e-12; t += xstep) {
            const double px = ml + (t - x_min) / (x_max - x_min) * pw;
            out << "<line x1=\"" << px << "\" y1=\"" << mt << "\" x2=\"" << px << "\" y2=\""
                << mt + ph << "\" stroke=\"#dddddd\"/>\n"
                << "<text x=\"" << px << "\" y=\"" << mt + ph + 18
                << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
                << detail::fmt(t) << "</text>\n";
        }
    }
    out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << opts.height - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << opts.x_label
        << "</text>\n"
        << "<text x=\"18\" y=\"" << mt + ph / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 18 " << mt + ph / 2 << ")\">" << opts.y_label << "</text>\n";

    // Series polylines and legend.
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << "<polyline fill=\"none\" stroke=\"" << detail::series_color(i)
            << "\" stroke-width=\"1.8\" points=\"";
        for (const auto& [x, y] : series[i].points) {
            out << detail::fmt(sx(x)) << ',' << detail::fmt(sy(y)) << ' ';
        }
        out << "\"/>\n";
        const double ly = mt + 16 + 18 * static_cast<double>(i);
        out << "<line x1=\"" << ml + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << ml + pw + 34
            << "\" y2=\"" << ly << "\" stroke=\"" << detail::series_color(i)
            << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << ml + pw + 40 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << series[i].label << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) {
        throw IoError("emit_svg_chart: write failure on " + path);
    }
}

}  // namespace jamrx
