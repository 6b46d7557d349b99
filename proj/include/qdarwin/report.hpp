// Copyright 2026 The qdarwin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Text outputs: sweep CSV, figure tables and a standalone SVG heatmap.
// All numbers are printed with printf-style formatting so output bytes
// depend only on the values.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdarwin/experiments.hpp"

namespace qdarwin {

/// 12 significant digits.
inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline constexpr const char* kSweepCsvHeader =
    "model,realizations,time,fragment_size,I_mean,I_stderr,chi_mean,chi_stderr,discord_mean,S_mean,ratio_mean";

inline void write_csv(const SweepResult& result, std::ostream& out) {
    const auto& cfg = result.config;
    std::vector<std::size_t> t_order(cfg.time_grid.size()), f_order(cfg.fragment_sizes.size());
    std::iota(t_order.begin(), t_order.end(), 0);
    std::iota(f_order.begin(), f_order.end(), 0);
    std::stable_sort(t_order.begin(), t_order.end(), [&](auto a, auto b) { return cfg.time_grid[a] < cfg.time_grid[b]; });
    std::stable_sort(f_order.begin(), f_order.end(),
                     [&](auto a, auto b) { return cfg.fragment_sizes[a] < cfg.fragment_sizes[b]; });

    auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
    out << kSweepCsvHeader << '\n';
    for (auto ti : t_order) {
        for (auto fi : f_order) {
            const auto& c = result.at(ti, fi);
            out << result.model_label << ',' << result.realizations << ',' << format_number(cfg.time_grid[ti]) << ','
                << cfg.fragment_sizes[fi] << ',' << format_number(c.I_mean) << ',' << format_number(c.I_stderr) << ','
                << opt(c.chi_mean) << ',' << opt(c.chi_stderr) << ',' << opt(c.discord_mean) << ','
                << format_number(c.S_mean) << ',' << format_number(c.ratio_mean) << '\n';
        }
    }
}

namespace detail {
inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

inline void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + path);
}
}  // namespace detail

inline void write_csv(const SweepResult& result, const std::string& path) {
    auto out = detail::open_output(path);
    write_csv(result, out);
    detail::finish(out, path);
}

inline void write_fig2_csv(const std::vector<Fig2Row>& rows, std::ostream& out) {
    out << "n,I_inf,chi_inf\n";
    for (const auto& r : rows) out << r.n << ',' << format_number(r.I_inf) << ',' << format_number(r.chi_inf) << '\n';
}

struct GammaRow {
    double t;
    double value;
};

inline void write_gamma_csv(const std::vector<GammaRow>& rows, std::ostream& out) {
    out << "t,avg_gamma_sq\n";
    for (const auto& r : rows) out << format_number(r.t) << ',' << format_number(r.value) << '\n';
}

// ---------------------------------------------------------------------------
// SVG heatmap

enum class HeatmapQuantity { Ratio, I, Chi };

inline HeatmapQuantity parse_heatmap_quantity(const std::string& s) {
    if (s == "ratio") return HeatmapQuantity::Ratio;
    if (s == "I") return HeatmapQuantity::I;
    if (s == "chi") return HeatmapQuantity::Chi;
    throw std::invalid_argument("quantity must be ratio, I or chi");
}

namespace detail {

// Piecewise-linear palette from dark blue through teal to yellow.
inline std::string heat_color(double x) {
    static constexpr std::array<std::array<double, 3>, 3> stops{{{68, 1, 84}, {33, 145, 140}, {253, 231, 37}}};
    x = std::clamp(x, 0.0, 1.0) * 2.0;
    const int k = std::min(static_cast<int>(x), 1);
    const double f = x - k;
    char buf[8];
    int rgb[3];
    for (int c = 0; c < 3; ++c) rgb[c] = static_cast<int>(std::lround(stops[k][c] + f * (stops[k + 1][c] - stops[k][c])));
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
    return buf;
}

inline std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

}  // namespace detail

/// Time runs left to right, fragment size bottom to top; one rect per cell,
/// coloured linearly between the grid minimum and maximum.
inline void render_heatmap_svg(const SweepResult& result, HeatmapQuantity quantity, std::ostream& out) {
    const auto& cfg = result.config;
    const std::size_t nt = cfg.time_grid.size();
    const std::size_t nf = cfg.fragment_sizes.size();
    if (nt == 0 || nf == 0 || result.cells.empty()) throw std::invalid_argument("empty sweep result");
    if (quantity == HeatmapQuantity::Chi && !result.has_chi) throw std::invalid_argument("sweep has no chi values");

    auto value = [&](std::size_t ti, std::size_t fi) {
        const auto& c = result.at(ti, fi);
        switch (quantity) {
            case HeatmapQuantity::Ratio: return c.ratio_mean;
            case HeatmapQuantity::I: return c.I_mean;
            case HeatmapQuantity::Chi: return *c.chi_mean;
        }
        return 0.0;
    };

    std::vector<std::size_t> t_order(nt), f_order(nf);
    std::iota(t_order.begin(), t_order.end(), 0);
    std::iota(f_order.begin(), f_order.end(), 0);
    std::stable_sort(t_order.begin(), t_order.end(), [&](auto a, auto b) { return cfg.time_grid[a] < cfg.time_grid[b]; });
    std::stable_sort(f_order.begin(), f_order.end(),
                     [&](auto a, auto b) { return cfg.fragment_sizes[a] < cfg.fragment_sizes[b]; });

    double lo = value(0, 0), hi = lo;
    for (std::size_t ti = 0; ti < nt; ++ti) {
        for (std::size_t fi = 0; fi < nf; ++fi) {
            lo = std::min(lo, value(ti, fi));
            hi = std::max(hi, value(ti, fi));
        }
    }

    constexpr double left = 70, top = 40, plot_w = 600, plot_h = 300;
    const double cw = plot_w / static_cast<double>(nt);
    const double ch = plot_h / static_cast<double>(nf);
    const char* names[] = {"I / S_max", "I(S:F)", "chi(S:F)"};

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"760\" height=\"420\" viewBox=\"0 0 760 420\">\n";
    out << "<rect width=\"760\" height=\"420\" fill=\"white\"/>\n";
    out << "<text x=\"" << left << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << result.model_label
        << ": " << names[static_cast<int>(quantity)] << " (" << result.realizations << " realizations)</text>\n";
    for (std::size_t c = 0; c < nt; ++c) {
        for (std::size_t r = 0; r < nf; ++r) {
            const double v = value(t_order[c], f_order[r]);
            const double x = hi > lo ? (v - lo) / (hi - lo) : 0.5;
            out << "<rect x=\"" << detail::fmt("%.4f", left + cw * static_cast<double>(c)) << "\" y=\""
                << detail::fmt("%.4f", top + plot_h - ch * static_cast<double>(r + 1)) << "\" width=\""
                << detail::fmt("%.4f", cw) << "\" height=\"" << detail::fmt("%.4f", ch) << "\" fill=\""
                << detail::heat_color(x) << "\"/>\n";
        }
    }
    // Axes.
    out << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w << "\" y2=\""
        << top + plot_h << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << left << "\" y=\"" << top + plot_h + 16 << "\" font-family=\"sans-serif\" font-size=\"11\">"
        << format_number(cfg.time_grid[t_order.front()]) << "</text>\n";
    out << "<text x=\"" << left + plot_w << "\" y=\"" << top + plot_h + 16
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << format_number(cfg.time_grid[t_order.back()])
        << "</text>\n";
    out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << top + plot_h + 32
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">time</text>\n";
    for (std::size_t r = 0; r < nf; ++r) {
        out << "<text x=\"" << left - 6 << "\" y=\"" << detail::fmt("%.4f", top + plot_h - ch * (static_cast<double>(r) + 0.5) + 4)
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << cfg.fragment_sizes[f_order[r]]
            << "</text>\n";
    }
    out << "<text x=\"16\" y=\"" << top + plot_h / 2 << "\" font-family=\"sans-serif\" font-size=\"12\" "
        << "text-anchor=\"middle\" transform=\"rotate(-90 16 " << top + plot_h / 2 << ")\">fragment size</text>\n";
    // Colour bar with min/max.
    for (int k = 0; k < 20; ++k) {
        out << "<rect x=\"690\" y=\"" << top + plot_h - 15 * (k + 1) << "\" width=\"20\" height=\"15\" fill=\""
            << detail::heat_color((k + 0.5) / 20.0) << "\"/>\n";
    }
    out << "<text x=\"715\" y=\"" << top + 10 << "\" font-family=\"sans-serif\" font-size=\"11\">max "
        << detail::fmt("%.4g", hi) << "</text>\n";
    out << "<text x=\"715\" y=\"" << top + plot_h << "\" font-family=\"sans-serif\" font-size=\"11\">min "
        << detail::fmt("%.4g", lo) << "</text>\n";
    out << "</svg>\n";
}

inline void render_heatmap_svg(const SweepResult& result, HeatmapQuantity quantity, const std::string& path) {
    auto out = detail::open_output(path);
    render_heatmap_svg(result, quantity, out);
    detail::finish(out, path);
}

}  // namespace qdarwin
