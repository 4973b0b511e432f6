#include "rankone/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rankone/resolvent.hpp"

namespace rankone {

namespace {

constexpr int kMargin = 40;

std::string px(double v) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(2);
    out << v;
    return out.str();
}

}  // namespace

void PlotSpec::validate() const {
    if (width <= 0 || height <= 0) throw ConfigError("plot spec: dimensions must be positive");
    if (!auto_axes) {
        if (!(std::isfinite(x_min) && std::isfinite(x_max) && std::isfinite(y_min) &&
              std::isfinite(y_max)) ||
            !(x_max > x_min) || !(y_max > y_min))
            throw ConfigError("plot spec: fixed axis ranges must be finite and ordered");
    }
    if ((mark_t_star || draw_outlier_disk) && !(t > 1.0))
        throw ConfigError("plot spec: t* overlays need t > 1");
}

std::string render_svg(const TrajectoryBundle& bundle, const PlotSpec& spec) {
    spec.validate();
    if (bundle.lambdas.empty() || bundle.n() == 0)
        throw ConfigError("render_svg: empty trajectory bundle");
    const int n = bundle.n();

    double x_lo = spec.x_min, x_hi = spec.x_max, y_lo = spec.y_min, y_hi = spec.y_max;
    if (spec.auto_axes) {
        x_lo = y_lo = std::numeric_limits<double>::infinity();
        x_hi = y_hi = -std::numeric_limits<double>::infinity();
        for (const auto& lam : bundle.lambdas) {
            for (int j = 0; j < n; ++j) {
                x_lo = std::min(x_lo, lam[j].real());
                x_hi = std::max(x_hi, lam[j].real());
                y_lo = std::min(y_lo, lam[j].imag());
                y_hi = std::max(y_hi, lam[j].imag());
            }
        }
        if (spec.mark_t_star || spec.draw_outlier_disk) {
            const double ts = t_star(spec.t);
            y_hi = std::max(y_hi, ts + spec.disk_radius);
            y_lo = std::min(y_lo, ts - spec.disk_radius);
            x_lo = std::min(x_lo, -spec.disk_radius);
            x_hi = std::max(x_hi, spec.disk_radius);
        }
        const double x_pad = 0.05 * std::max(x_hi - x_lo, 1e-9);
        const double y_pad = 0.05 * std::max(y_hi - y_lo, 1e-9);
        x_lo -= x_pad;
        x_hi += x_pad;
        y_lo -= y_pad;
        y_hi += y_pad;
    }

    const double sx = (spec.width - 2.0 * kMargin) / (x_hi - x_lo);
    const double sy = (spec.height - 2.0 * kMargin) / (y_hi - y_lo);
    const auto map_x = [&](double x) { return kMargin + (x - x_lo) * sx; };
    const auto map_y = [&](double y) { return spec.height - kMargin - (y - y_lo) * sy; };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
        << spec.height << "\" viewBox=\"0 0 " << spec.width << " " << spec.height << "\">\n"
        << "<rect width=\"" << spec.width << "\" height=\"" << spec.height
        << "\" fill=\"white\"/>\n";

    if (spec.draw_real_axis && y_lo <= 0.0 && y_hi >= 0.0) {
        out << "<line x1=\"" << px(map_x(x_lo)) << "\" y1=\"" << px(map_y(0.0)) << "\" x2=\""
            << px(map_x(x_hi)) << "\" y2=\"" << px(map_y(0.0))
            << "\" stroke=\"#888888\" stroke-width=\"1\"/>\n";
    }

    for (int j = 0; j < n; ++j) {
        const int hue = static_cast<int>(std::lround(360.0 * j / std::max(n, 1))) % 360;
        out << "<polyline fill=\"none\" stroke=\"hsl(" << hue
            << ",70%,45%)\" stroke-width=\"1\" points=\"";
        for (std::size_t s = 0; s < bundle.lambdas.size(); ++s) {
            if (s) out << ' ';
            out << px(map_x(bundle.lambdas[s][j].real())) << ','
                << px(map_y(bundle.lambdas[s][j].imag()));
        }
        out << "\"/>\n";
    }

    if (spec.mark_t_star || spec.draw_outlier_disk) {
        const double ts = t_star(spec.t);
        if (spec.draw_outlier_disk && spec.disk_radius > 0.0) {
            out << "<ellipse cx=\"" << px(map_x(0.0)) << "\" cy=\"" << px(map_y(ts)) << "\" rx=\""
                << px(spec.disk_radius * sx) << "\" ry=\"" << px(spec.disk_radius * sy)
                << "\" fill=\"none\" stroke=\"#cc3333\" stroke-width=\"1\" "
                   "stroke-dasharray=\"4 3\"/>\n";
        }
        if (spec.mark_t_star) {
            out << "<circle cx=\"" << px(map_x(0.0)) << "\" cy=\"" << px(map_y(ts))
                << "\" r=\"3\" fill=\"#cc3333\"/>\n";
        }
    }

    out << "</svg>\n";
    return out.str();
}

}  // namespace rankone
