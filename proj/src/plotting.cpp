// SPDX-License-Identifier: Apache-2.0
//
// holobeam: Lorentzian-constrained holographic beamforming for DMA-aided MISO downlink
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "holobeam/plotting.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace holobeam {

namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 80, kRight = 170, kTop = 40, kBottom = 60;
const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// Roughly five round-numbered ticks covering [lo, hi].
std::vector<double> linear_ticks(double lo, double hi) {
    const double span = hi - lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        step = m * mag;
        if (step >= raw) break;
    }
    std::vector<double> t;
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) t.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
    return t;
}

double cell_number(const CsvTable& t, std::size_t row, int col) {
    const std::string& s = t.rows[row][static_cast<std::size_t>(col)];
    const int line = row < t.row_lines.size() ? t.row_lines[row] : static_cast<int>(row) + 1;
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::runtime_error("CSV line " + std::to_string(line) + ": column '" + t.columns[static_cast<std::size_t>(col)] +
                                 "' is not a number: '" + s + "'");
    return v;
}

int need(const CsvTable& t, const std::string& name) {
    const int c = t.column(name);
    if (c < 0) throw std::runtime_error("CSV line " + std::to_string(t.header_line) + ": missing column '" + name + "'");
    return c;
}

// One series per distinct value of the `group` columns, in order of appearance.
std::vector<PlotSeries> grouped(const CsvTable& t, const std::vector<std::string>& group, const std::string& x,
                                const std::string& y) {
    std::vector<int> gcols;
    for (const auto& g : group) gcols.push_back(need(t, g));
    const int xc = need(t, x), yc = need(t, y);
    std::vector<PlotSeries> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        std::string key;
        for (std::size_t i = 0; i < gcols.size(); ++i) key += (i ? " " : "") + t.rows[r][static_cast<std::size_t>(gcols[i])];
        auto it = std::find_if(out.begin(), out.end(), [&](const PlotSeries& s) { return s.name == key; });
        if (it == out.end()) {
            out.push_back({key, {}});
            it = out.end() - 1;
        }
        it->points.emplace_back(cell_number(t, r, xc), cell_number(t, r, yc));
    }
    return out;
}

}  // namespace

std::string render_svg(const Chart& chart) {
    std::vector<PlotSeries> series;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    for (const auto& s : chart.series) {
        PlotSeries kept{s.name, {}};
        for (auto [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y) || (chart.log_y && y <= 0.0)) continue;
            const double yv = chart.log_y ? std::log10(y) : y;
            kept.points.emplace_back(x, yv);
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, yv);
            ymax = std::max(ymax, yv);
        }
        series.push_back(std::move(kept));
    }
    const bool empty = !std::isfinite(xmin);
    if (empty) {
        xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    }
    if (xmax - xmin <= 0.0) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (ymax - ymin <= 0.0) {
        const double pad = std::max(std::abs(ymin) * 0.05, chart.log_y ? 0.5 : 1e-12);
        ymin -= pad;
        ymax += pad;
    } else {
        const double pad = 0.05 * (ymax - ymin);
        ymin -= pad;
        ymax += pad;
    }
    if (chart.log_y) {
        ymin = std::floor(ymin);
        ymax = std::ceil(ymax);
    }

    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return kTop + ph - (y - ymin) / (ymax - ymin) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << fmt(kLeft + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(chart.title) << "</text>\n";
    o << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\"" << fmt(pw) << "\" height=\"" << fmt(ph)
      << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (double t : linear_ticks(xmin, xmax)) {
        o << "<line x1=\"" << fmt(px(t)) << "\" y1=\"" << fmt(kTop + ph) << "\" x2=\"" << fmt(px(t)) << "\" y2=\""
          << fmt(kTop + ph + 5) << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << fmt(px(t)) << "\" y=\"" << fmt(kTop + ph + 18) << "\" text-anchor=\"middle\">"
          << tick_label(t) << "</text>\n";
    }
    std::vector<double> yt;
    if (chart.log_y) {
        const double step = std::max(1.0, std::ceil((ymax - ymin) / 8.0));
        for (double v = ymin; v <= ymax + 1e-9; v += step) yt.push_back(v);
    } else {
        yt = linear_ticks(ymin, ymax);
    }
    for (double t : yt) {
        o << "<line x1=\"" << fmt(kLeft - 5) << "\" y1=\"" << fmt(py(t)) << "\" x2=\"" << fmt(kLeft + pw) << "\" y2=\""
          << fmt(py(t)) << "\" stroke=\"#dddddd\"/>\n";
        o << "<text x=\"" << fmt(kLeft - 8) << "\" y=\"" << fmt(py(t) + 4) << "\" text-anchor=\"end\">"
          << (chart.log_y ? "1e" + tick_label(t) : tick_label(t)) << "</text>\n";
    }
    o << "<text x=\"" << fmt(kLeft + pw / 2) << "\" y=\"" << fmt(kHeight - 15) << "\" text-anchor=\"middle\">"
      << escape(chart.x_label) << "</text>\n";
    o << "<text transform=\"translate(18," << fmt(kTop + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(chart.y_label) << "</text>\n";

    if (empty) {
        o << "<text x=\"" << fmt(kLeft + pw / 2) << "\" y=\"" << fmt(kTop + ph / 2)
          << "\" text-anchor=\"middle\" font-size=\"16\" fill=\"#888888\">no data</text>\n";
    }
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* colour = kPalette[i % (sizeof kPalette / sizeof kPalette[0])];
        const auto& pts = series[i].points;
        if (!chart.markers_only && pts.size() > 1) {
            o << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t k = 0; k < pts.size(); ++k) o << (k ? " " : "") << fmt(px(pts[k].first)) << "," << fmt(py(pts[k].second));
            o << "\"/>\n";
        }
        for (const auto& [x, y] : pts)
            o << "<circle cx=\"" << fmt(px(x)) << "\" cy=\"" << fmt(py(y)) << "\" r=\"2.5\" fill=\"" << colour << "\"/>\n";
        const double ly = kTop + 14 + 18 * static_cast<double>(i);
        o << "<rect x=\"" << fmt(kLeft + pw + 12) << "\" y=\"" << fmt(ly - 9) << "\" width=\"10\" height=\"10\" fill=\""
          << colour << "\"/>\n";
        o << "<text x=\"" << fmt(kLeft + pw + 28) << "\" y=\"" << fmt(ly) << "\">" << escape(series[i].name) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

std::vector<std::pair<std::string, Chart>> charts_for(const CsvTable& t) {
    std::vector<std::pair<std::string, Chart>> out;
    const std::string& f = t.family;
    if (f == "angle_sweep") {
        out.push_back({"angle_sweep_power", {"Transmit power versus user angle", "theta [deg]", "P_Tx [mW]", true, false,
                                             grouped(t, {"method"}, "theta_deg", "p_tx_mw")}});
        out.push_back({"angle_sweep_ratio", {"Transmit power relative to FD", "theta [deg]", "P_Tx / P_FD", false, false,
                                             grouped(t, {"method"}, "theta_deg", "ratio_to_fd")}});
    } else if (f == "snr_sweep") {
        out.push_back({"snr_sweep", {"Mean transmit power versus SINR target", "delta [dB]", "mean P_Tx [mW]", true, false,
                                     grouped(t, {"method"}, "delta_db", "mean_p_tx_mw")}});
    } else if (f == "monte_carlo") {
        out.push_back({"monte_carlo", {"Transmit power per realisation", "realisation", "P_Tx [mW]", true, true,
                                       grouped(t, {"method"}, "realization", "p_tx_mw")}});
    } else if (f == "user_sweep") {
        out.push_back({"user_sweep", {"Mean transmit power versus number of users", "K", "mean P_Tx [mW]", true, false,
                                      grouped(t, {"method"}, "n_users", "mean_p_tx_mw")}});
    } else if (f == "spacing_sweep") {
        out.push_back({"spacing_sweep", {"Mean transmit power versus element spacing", "d_x / lambda", "mean P_Tx [mW]",
                                         true, false, grouped(t, {"method"}, "dx_over_lambda", "mean_p_tx_mw")}});
    } else if (f == "convergence") {
        out.push_back({"convergence", {"Best-so-far transmit power per iteration", "iteration", "P_Tx [mW]", true, false,
                                       grouped(t, {"method", "point"}, "t", "best_so_far")}});
    } else if (f == "arlch_trace") {
        out.push_back({"arlch_trace", {"ARLCH fitting cost", "iteration", "E", true, false,
                                       grouped(t, {"point", "outer_t"}, "t", "cost")}});
    } else if (f == "solve") {
        Chart c{"Transmit power per method", "method index", "P_Tx [mW]", true, true, {}};
        const int mc = need(t, "method"), pc = need(t, "p_tx_mw");
        for (std::size_t r = 0; r < t.rows.size(); ++r)
            c.series.push_back({t.rows[r][static_cast<std::size_t>(mc)], {{static_cast<double>(r), cell_number(t, r, pc)}}});
        out.push_back({"solve", std::move(c)});
    } else {
        throw std::runtime_error("unknown CSV family '" + f + "'");
    }
    return out;
}

std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& csv_path, const std::filesystem::path& out_dir) {
    const CsvTable table = read_csv(csv_path);
    std::filesystem::path dir = out_dir.empty() ? csv_path.parent_path() : out_dir;
    if (!dir.empty()) std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    for (const auto& [stem, chart] : charts_for(table)) {
        const auto path = dir / (stem + ".svg");
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + path.string());
        f << render_svg(chart);
        written.push_back(path);
    }
    return written;
}

}  // namespace holobeam
