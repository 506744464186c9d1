#pragma once

#include <optional>
#include <string>

#include "narrowcap/geometry.hpp"
#include "narrowcap/network.hpp"

namespace narrowcap {

struct RenderSpec {
    double xmin = 0.0, ymin = 0.0, xmax = 1.0, ymax = 1.0;
    int width_px = 600;
    int height_px = 600;
    std::vector<std::string> class_colors = {"#1f77b4", "#d62728", "#2ca02c",
                                             "#ff7f0e", "#9467bd", "#8c564b"};
    double point_radius = 2.0;
    int decision_grid = 120;       // cells per axis for decision shading
    double decision_midpoint = 0.5;  // threshold between the two class values
    std::string title;
};

/// Deterministic SVG 1.1 scatter plot of 2-D clouds, optionally shaded by
/// the thresholded decision regions of a scalar network.
std::string render_svg(const std::vector<std::pair<PointCloud, int>>& clouds,
                       const RenderSpec& spec, const Network* net = nullptr);

}  // namespace narrowcap
