#pragma once

#include <string>

#include "rankone/trajectory.hpp"

namespace rankone {

// Plot layout for trajectory figures in the complex plane. Axis ranges are
// computed from the data unless fixed explicitly. Overlays: the real axis,
// a marker at i t*, and the outlier disk of the classification theorem.
struct PlotSpec {
    int width = 900;
    int height = 600;
    bool auto_axes = true;
    double x_min = -2.5, x_max = 2.5;
    double y_min = 0.0, y_max = 1.0;
    bool draw_real_axis = true;
    bool mark_t_star = false;
    double t = 0.0;  // supplies t* for the marker/disk overlays
    bool draw_outlier_disk = false;
    double disk_radius = 0.0;

    void validate() const;
};

// Renders one polyline per trajectory, colored by index. Throws on an empty
// bundle. Coordinates are written with two decimals, so equal bundles give
// byte-identical documents.
std::string render_svg(const TrajectoryBundle& bundle, const PlotSpec& spec);

}  // namespace rankone
