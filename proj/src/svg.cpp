// SPDX-License-Identifier: Apache-2.0
//
// canyon-sounder: simulation and processing toolkit for directional
// correlation channel sounding in street canyons
// Copyright (C) 2026 The canyon-sounder Authors
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

#include "canyon/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace canyon {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

std::string escape(const std::string &text) {
    std::string out;
    for (const char c : text) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

} // namespace

std::string render_cir_svg(const OmniCir &omni, double noise_floor_db,
                           const std::vector<PathEstimate> &estimates,
                           const std::string &title) {
    const double width = 860.0, height = 480.0;
    const double left = 80.0, right = 30.0, top = 50.0, bottom = 60.0;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    // Delay axis in nanoseconds.
    double x_min = 0.0, x_max = 1.0;
    if (!omni.power_db.empty()) {
        x_min = omni.delay_start_s * 1.0e9;
        x_max = (omni.delay_start_s +
                 omni.delay_step_s *
                     static_cast<double>(omni.power_db.size() - 1)) *
                1.0e9;
        if (!(x_max > x_min))
            x_max = x_min + 1.0;
    }
    double y_min = std::numeric_limits<double>::infinity();
    double y_max = -std::numeric_limits<double>::infinity();
    for (const double p : omni.power_db) {
        if (std::isfinite(p)) {
            y_min = std::min(y_min, p);
            y_max = std::max(y_max, p);
        }
    }
    if (std::isfinite(noise_floor_db)) {
        y_min = std::min(y_min, noise_floor_db);
        y_max = std::max(y_max, noise_floor_db);
    }
    if (!std::isfinite(y_min) || !std::isfinite(y_max)) {
        y_min = -160.0;
        y_max = 0.0;
    }
    const double pad = std::max(5.0, 0.05 * (y_max - y_min));
    y_min -= pad;
    y_max += pad;

    auto x_of = [&](double delay_ns) {
        return left + (delay_ns - x_min) / (x_max - x_min) * plot_w;
    };
    auto y_of = [&](double db) {
        return top + (y_max - db) / (y_max - y_min) * plot_h;
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) +
           "\" height=\"" + num(height) + "\" viewBox=\"0 0 " + num(width) +
           " " + num(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    svg += "<text x=\"" + num(width / 2) +
           "\" y=\"28\" font-family=\"sans-serif\" font-size=\"16\" "
           "text-anchor=\"middle\" fill=\"#222222\">" +
           escape(title) + "</text>\n";
    // Frame.
    svg += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" +
           num(plot_w) + "\" height=\"" + num(plot_h) +
           "\" fill=\"none\" stroke=\"#444444\"/>\n";
    // Ticks and grid.
    for (int i = 0; i <= 6; ++i) {
        const double fx = static_cast<double>(i) / 6.0;
        const double vx = x_min + fx * (x_max - x_min);
        const double px = x_of(vx);
        svg += "<line x1=\"" + num(px) + "\" y1=\"" + num(top) + "\" x2=\"" +
               num(px) + "\" y2=\"" + num(top + plot_h) +
               "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + num(px) + "\" y=\"" + num(top + plot_h + 18) +
               "\" font-family=\"sans-serif\" font-size=\"11\" "
               "text-anchor=\"middle\" fill=\"#222222\">" +
               label(vx) + "</text>\n";
        const double vy = y_min + fx * (y_max - y_min);
        const double py = y_of(vy);
        svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(py) + "\" x2=\"" +
               num(left + plot_w) + "\" y2=\"" + num(py) +
               "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + num(left - 8) + "\" y=\"" + num(py + 4) +
               "\" font-family=\"sans-serif\" font-size=\"11\" "
               "text-anchor=\"end\" fill=\"#222222\">" +
               label(vy) + "</text>\n";
    }
    svg += "<text x=\"" + num(left + plot_w / 2) + "\" y=\"" +
           num(height - 14) +
           "\" font-family=\"sans-serif\" font-size=\"13\" "
           "text-anchor=\"middle\" fill=\"#222222\">delay [ns]</text>\n";
    svg += "<text x=\"20\" y=\"" + num(top + plot_h / 2) +
           "\" font-family=\"sans-serif\" font-size=\"13\" "
           "text-anchor=\"middle\" fill=\"#222222\" transform=\"rotate(-90 20 " +
           num(top + plot_h / 2) + ")\">gain [dB]</text>\n";

    // Profile polylines, broken at non-finite samples.
    std::string points;
    auto flush = [&]() {
        if (!points.empty()) {
            svg += "<polyline fill=\"none\" stroke=\"#1f77b4\" "
                   "stroke-width=\"1.2\" points=\"" +
                   points + "\"/>\n";
            points.clear();
        }
    };
    for (std::size_t i = 0; i < omni.power_db.size(); ++i) {
        const double p = omni.power_db[i];
        if (!std::isfinite(p)) {
            flush();
            continue;
        }
        const double delay_ns =
            (omni.delay_start_s + static_cast<double>(i) * omni.delay_step_s) *
            1.0e9;
        const double clamped = std::clamp(p, y_min, y_max);
        if (!points.empty())
            points += ' ';
        points += num(x_of(delay_ns)) + "," + num(y_of(clamped));
    }
    flush();

    if (std::isfinite(noise_floor_db)) {
        const double py = y_of(noise_floor_db);
        svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(py) + "\" x2=\"" +
               num(left + plot_w) + "\" y2=\"" + num(py) +
               "\" stroke=\"#888888\" stroke-dasharray=\"6 4\"/>\n";
    }
    for (const PathEstimate &est : estimates) {
        const double delay_ns = est.delay_s * 1.0e9;
        if (delay_ns < x_min || delay_ns > x_max ||
            !std::isfinite(est.power_db))
            continue;
        svg += "<circle cx=\"" + num(x_of(delay_ns)) + "\" cy=\"" +
               num(y_of(std::clamp(est.power_db, y_min, y_max))) +
               "\" r=\"3.5\" fill=\"none\" stroke=\"#d62728\" "
               "stroke-width=\"1.4\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

std::string render_rose_svg(const RoseData &rose, int n_angle_bins,
                            double angle_step_rad, const std::string &title) {
    const double size = 560.0;
    const double cx = size / 2.0, cy = size / 2.0 + 10.0;
    const double radius = 210.0;

    double max_bin = 0.0;
    for (const double v : rose.bin_power_normalized)
        max_bin = std::max(max_bin, v);

    auto point = [&](double angle_rad, double r) {
        // Angle 0 points right (toward the transmitter reference direction),
        // counter-clockwise positive; SVG's y axis grows downward.
        return num(cx + r * std::cos(angle_rad)) + "," +
               num(cy - r * std::sin(angle_rad));
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(size) +
           "\" height=\"" + num(size) + "\" viewBox=\"0 0 " + num(size) + " " +
           num(size) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    svg += "<text x=\"" + num(size / 2) +
           "\" y=\"28\" font-family=\"sans-serif\" font-size=\"16\" "
           "text-anchor=\"middle\" fill=\"#222222\">" +
           escape(title) + "</text>\n";
    for (int ring = 1; ring <= 4; ++ring) {
        const double r = radius * static_cast<double>(ring) / 4.0;
        svg += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" +
               num(r) + "\" fill=\"none\" stroke=\"#dddddd\"/>\n";
        if (max_bin > 0.0) {
            svg += "<text x=\"" + num(cx + 4) + "\" y=\"" + num(cy - r - 3) +
                   "\" font-family=\"sans-serif\" font-size=\"10\" "
                   "fill=\"#888888\">" +
                   label(max_bin * static_cast<double>(ring) / 4.0) +
                   "</text>\n";
        }
    }
    // Spokes every 45 degrees with angle labels.
    for (int k = 0; k < 8; ++k) {
        const double a = pi / 4.0 * static_cast<double>(k);
        svg += "<line x1=\"" + num(cx) + "\" y1=\"" + num(cy) + "\" x2=\"" +
               num(cx + radius * std::cos(a)) + "\" y2=\"" +
               num(cy - radius * std::sin(a)) + "\" stroke=\"#eeeeee\"/>\n";
        svg += "<text x=\"" + num(cx + (radius + 16) * std::cos(a)) +
               "\" y=\"" + num(cy - (radius + 16) * std::sin(a) + 4) +
               "\" font-family=\"sans-serif\" font-size=\"11\" "
               "text-anchor=\"middle\" fill=\"#222222\">" +
               std::to_string(k * 45) + "&#176;</text>\n";
    }
    if (max_bin > 0.0) {
        for (int b = 0; b < n_angle_bins; ++b) {
            const double v =
                rose.bin_power_normalized[static_cast<std::size_t>(b)];
            if (!(v > 0.0))
                continue;
            const double center = angle_step_rad * static_cast<double>(b);
            const double a0 = center - 0.5 * angle_step_rad;
            const double a1 = center + 0.5 * angle_step_rad;
            const double r = radius * v / max_bin;
            svg += "<path d=\"M " + num(cx) + " " + num(cy) + " L " +
                   point(a0, r) + " A " + num(r) + " " + num(r) + " 0 0 0 " +
                   point(a1, r) + " Z\" fill=\"#1f77b4\" fill-opacity=\"0.45\" "
                   "stroke=\"#1f77b4\"/>\n";
        }
        for (const auto &[bin, fraction] : rose.path_dots) {
            const double center = angle_step_rad * static_cast<double>(bin);
            const double r = radius * fraction / max_bin;
            svg += "<circle cx=\"" +
                   num(cx + r * std::cos(center)) + "\" cy=\"" +
                   num(cy - r * std::sin(center)) +
                   "\" r=\"3\" fill=\"#d62728\"/>\n";
        }
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace canyon
