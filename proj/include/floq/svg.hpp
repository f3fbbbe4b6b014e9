#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>

#include "floq/analysis.hpp"
#include "floq/lattice.hpp"
#include "floq/trajectory.hpp"

namespace floq {

// In-plane magnetization vector field at one stroboscopic step: an arrow per
// site at its layout coordinate, direction atan2(<Y>, <X>), length scaled to
// the largest amplitude in the panel. Sites with vanishing amplitude are
// drawn as dots. Output is deterministic text (fixed precision).
inline std::string snapshot_svg(const TrajectoryRecord& rec, const LatticeGraph& graph, int step) {
    if (!rec.has_y()) throw std::invalid_argument("snapshot requires <Y_j> data");
    if (step < 0 || step >= rec.num_steps()) throw std::invalid_argument("snapshot step out of range");
    if (graph.num_sites != rec.num_sites) {
        throw std::invalid_argument("graph and record disagree on the number of sites");
    }

    double min_x = 1e300, max_x = -1e300, min_y = 1e300, max_y = -1e300;
    for (const auto& [cx, cy] : graph.coords) {
        min_x = std::min(min_x, cx);
        max_x = std::max(max_x, cx);
        min_y = std::min(min_y, cy);
        max_y = std::max(max_y, cy);
    }
    const double unit = 40.0;  // pixels per lattice length unit
    const double margin = 30.0;
    const double width = (max_x - min_x) * unit + 2 * margin;
    const double height = (max_y - min_y) * unit + 2 * margin;

    double r_max = 0.0;
    for (int j = 0; j < rec.num_sites; ++j) {
        r_max = std::max(r_max, complex_mag(rec, step, j).r);
    }
    const double arrow = 0.45 * unit;  // length of the largest arrow

    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.2f", v);
        return std::string(buf);
    };
    auto px = [&](double cx) { return margin + (cx - min_x) * unit; };
    auto py = [&](double cy) { return margin + (cy - min_y) * unit; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\""
        << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << " " << fmt(height) << "\">\n";
    out << "<!-- step " << step << " -->\n";
    for (const auto& [a, b] : graph.edges) {
        out << "<line x1=\"" << fmt(px(graph.coords[a].first)) << "\" y1=\""
            << fmt(py(graph.coords[a].second)) << "\" x2=\"" << fmt(px(graph.coords[b].first))
            << "\" y2=\"" << fmt(py(graph.coords[b].second))
            << "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
    }
    for (int j = 0; j < rec.num_sites; ++j) {
        const PolarSample s = complex_mag(rec, step, j);
        const double cx = px(graph.coords[j].first);
        const double cy = py(graph.coords[j].second);
        if (!s.defined || r_max <= kPhaseTolerance) {
            out << "<circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy)
                << "\" r=\"2\" fill=\"#333333\"/>\n";
            continue;
        }
        const double len = arrow * (s.r / r_max);
        // SVG y grows downward; flip so positive <Y> points up.
        const double dx = len * std::cos(s.theta);
        const double dy = -len * std::sin(s.theta);
        const double tipx = cx + dx, tipy = cy + dy;
        const double headx = 0.25 * len * std::cos(s.theta + 2.6);
        const double heady = -0.25 * len * std::sin(s.theta + 2.6);
        const double headx2 = 0.25 * len * std::cos(s.theta - 2.6);
        const double heady2 = -0.25 * len * std::sin(s.theta - 2.6);
        out << "<line x1=\"" << fmt(cx - dx) << "\" y1=\"" << fmt(cy - dy) << "\" x2=\"" << fmt(tipx)
            << "\" y2=\"" << fmt(tipy) << "\" stroke=\"#1f4e9c\" stroke-width=\"1.6\"/>\n";
        out << "<line x1=\"" << fmt(tipx) << "\" y1=\"" << fmt(tipy) << "\" x2=\""
            << fmt(tipx + headx) << "\" y2=\"" << fmt(tipy + heady)
            << "\" stroke=\"#1f4e9c\" stroke-width=\"1.6\"/>\n";
        out << "<line x1=\"" << fmt(tipx) << "\" y1=\"" << fmt(tipy) << "\" x2=\""
            << fmt(tipx + headx2) << "\" y2=\"" << fmt(tipy + heady2)
            << "\" stroke=\"#1f4e9c\" stroke-width=\"1.6\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace floq
