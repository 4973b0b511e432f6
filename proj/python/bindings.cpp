#include <pybind11/pybind11.h>
#include <pybind11/eigen.h>
#include <pybind11/stl.h>

#include <rankone/analysis.hpp>
#include <rankone/io.hpp>
#include <rankone/resolvent.hpp>
#include <rankone/rmt.hpp>
#include <rankone/svg.hpp>
#include <rankone/trajectory.hpp>
#include <rankone/types.hpp>

#include <sstream>

namespace py = pybind11;
using namespace rankone;

namespace {

ResolventInput make_input(const Eigen::VectorXd& mus, const Eigen::VectorXd& weights) {
    if (mus.size() != weights.size())
        throw ConfigError("mus and weights must have the same length");
    return ResolventInput{mus, weights};
}

DomainParams make_params(std::int64_t n, double epsilon, double zeta, double t_cap) {
    DomainParams p;
    p.n = n;
    p.epsilon = epsilon;
    p.zeta = zeta;
    p.t_cap = t_cap;
    p.validate();
    return p;
}

TimeGrid make_grid(double t_end, double dt, int refine) {
    return refine > 1 ? TimeGrid::refined_near_resonance(t_end, dt, refine)
                      : TimeGrid::uniform(t_end, dt);
}

py::dict bundle_to_dict(const TrajectoryBundle& bundle) {
    const int steps = bundle.grid.size();
    const int n = bundle.n();
    Eigen::MatrixXcd lam(steps, n);
    Eigen::VectorXd times(steps);
    for (int s = 0; s < steps; ++s) {
        times[s] = bundle.grid.points[s];
        lam.row(s) = bundle.lambdas[s].transpose();
    }
    py::dict d;
    d["t"] = times;
    d["lambdas"] = lam;
    d["method"] = bundle.method;
    d["min_pair_distance"] = bundle.min_pair_distance();
    return d;
}

TrajectoryBundle bundle_from_arrays(const Eigen::VectorXd& times, const Eigen::MatrixXcd& lam,
                                    const std::string& method) {
    if (times.size() != lam.rows())
        throw ConfigError("times and lambdas row count must match");
    TrajectoryBundle bundle;
    bundle.method = method;
    bundle.grid.points.assign(times.data(), times.data() + times.size());
    double dt_max = 0.0;
    for (int s = 1; s < times.size(); ++s) dt_max = std::max(dt_max, times[s] - times[s - 1]);
    bundle.grid.dt_max = dt_max;
    bundle.grid.validate();
    for (int s = 0; s < lam.rows(); ++s) bundle.lambdas.push_back(lam.row(s).transpose());
    return bundle;
}

}  // namespace

PYBIND11_MODULE(_rankone, m) {
    m.doc() = "Eigenvalue flow of H + it vv*: sampling, tracing, verification";

    py::register_exception<Error>(m, "RankoneError");

    m.attr("RNG_ALGORITHM") = std::string(kRngAlgorithm);

    py::class_<SampledSystem>(m, "SampledSystem")
        .def_property_readonly("H", [](const SampledSystem& s) { return s.H.entries; })
        .def_property_readonly("v", [](const SampledSystem& s) { return s.v.entries; })
        .def_property_readonly("mus", [](const SampledSystem& s) { return s.spec.mus; })
        .def_property_readonly("weights", [](const SampledSystem& s) { return s.spec.weights; })
        .def_property_readonly("eigvecs", [](const SampledSystem& s) { return s.spec.eigvecs; })
        .def_readonly("seed_used", &SampledSystem::seed_used)
        .def_readonly("resample_events", &SampledSystem::resample_events)
        .def("__repr__", [](const SampledSystem& s) {
            std::ostringstream os;
            os << "SampledSystem(n=" << s.H.n() << ", seed_used=" << s.seed_used << ")";
            return os.str();
        });

    m.def(
        "sample_system",
        [](int n, const std::string& ensemble, std::uint64_t seed) {
            RunConfig config;
            config.n = n;
            config.ensemble = ensemble_from_string(ensemble);
            config.seed = seed;
            return sample_system(config);
        },
        py::arg("n"), py::arg("ensemble") = "gue", py::arg("seed") = 0,
        "Draw (H, v) and the derived spectral data for the given seed.");

    m.def(
        "weighted_resolvent",
        [](const Eigen::VectorXd& mus, const Eigen::VectorXd& weights, Complex z) {
            return weighted_resolvent(make_input(mus, weights), z);
        },
        py::arg("mus"), py::arg("weights"), py::arg("z"),
        "W(z) = sum_j c_j / (mu_j - z).");

    m.def(
        "weighted_resolvent_deriv",
        [](const Eigen::VectorXd& mus, const Eigen::VectorXd& weights, Complex z) {
            return weighted_resolvent_deriv(make_input(mus, weights), z);
        },
        py::arg("mus"), py::arg("weights"), py::arg("z"));

    m.def("m_frak", &m_frak, py::arg("z"),
          "Semicircle Stieltjes transform continued through (-2, 2).");
    m.def("t_star", &t_star, py::arg("t"), "Resonance height t - 1/t.");

    m.def(
        "trace",
        [](const Eigen::VectorXd& mus, const Eigen::VectorXd& weights, double t_end,
           double dt, int refine) {
            return bundle_to_dict(
                trace_trajectories(make_input(mus, weights), make_grid(t_end, dt, refine)));
        },
        py::arg("mus"), py::arg("weights"), py::arg("t_end"), py::arg("dt") = 0.05,
        py::arg("refine") = 5,
        "Newton-continuation trajectories on a grid refined near t = 1.");

    m.def(
        "integrate_ode",
        [](const Eigen::VectorXd& mus, const Eigen::VectorXd& weights, double t_end,
           double grid_dt, double dt, int refine) {
            return bundle_to_dict(integrate_ode(make_input(mus, weights),
                                                make_grid(t_end, grid_dt, refine), dt));
        },
        py::arg("mus"), py::arg("weights"), py::arg("t_end"), py::arg("grid_dt") = 0.05,
        py::arg("dt") = 5e-4, py::arg("refine") = 5,
        "RK4 integration of the closed trajectory ODE.");

    m.def(
        "oracle_eigen",
        [](const Eigen::VectorXd& mus, const Eigen::VectorXd& weights, double t) {
            return oracle_eigen(mus, weights, t);
        },
        py::arg("mus"), py::arg("weights"), py::arg("t"),
        "Durand-Kerner roots of the characteristic polynomial (n <= 64).");

    m.def(
        "limit_points",
        [](const Eigen::MatrixXcd& H, const Eigen::VectorXcd& v) {
            return limit_points(HermitianMatrix{H}, UnitVector{v}).values;
        },
        py::arg("H"), py::arg("v"),
        "Large-t destinations: spectrum of H compressed orthogonally to v.");

    m.def(
        "matched_max_distance",
        [](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
            return matched_max_distance(a, b);
        },
        py::arg("a"), py::arg("b"),
        "Hausdorff-style distance after min-cost matching.");

    m.def(
        "classify_outlier",
        [](const Eigen::VectorXcd& lambdas, double t, std::int64_t n, double epsilon,
           double zeta, double t_cap) {
            const auto rep = classify_outlier(lambdas, t, make_params(n, epsilon, zeta, t_cap));
            py::dict d;
            d["t"] = rep.t;
            d["t_star"] = rep.t_star;
            d["outlier_index"] = rep.outlier_index;
            d["outlier_value"] = rep.outlier_value;
            d["disk_radius"] = rep.disk_radius;
            d["in_disk"] = rep.in_disk;
            d["bulk_bound"] = rep.bulk_bound;
            d["bulk_max_im"] = rep.bulk_max_im;
            d["separated"] = rep.separated;
            return d;
        },
        py::arg("lambdas"), py::arg("t"), py::arg("n"), py::arg("epsilon") = 0.3,
        py::arg("zeta") = 0.2, py::arg("t_cap") = 2.0,
        "Disk / bulk-ceiling separation report at a fixed time t > 1.");

    m.def(
        "local_law",
        [](const Eigen::VectorXd& mus, const Eigen::VectorXd& weights,
           const std::vector<Complex>& grid, std::int64_t n, double zeta) {
            const auto rep = local_law_error(make_input(mus, weights), grid, n, zeta);
            py::dict d;
            d["grid"] = rep.grid;
            d["raw_error"] = rep.raw_error;
            d["normalized_error"] = rep.normalized_error;
            d["sup_normalized"] = rep.sup_normalized;
            return d;
        },
        py::arg("mus"), py::arg("weights"), py::arg("grid"), py::arg("n"), py::arg("zeta"),
        "|W - m| over a grid in the spectral strip, raw and normalized.");

    m.def(
        "render_svg",
        [](const Eigen::VectorXd& times, const Eigen::MatrixXcd& lambdas,
           const std::string& method, int width, int height, bool mark_t_star, double t) {
            PlotSpec spec;
            spec.width = width;
            spec.height = height;
            spec.mark_t_star = mark_t_star;
            spec.t = t;
            return render_svg(bundle_from_arrays(times, lambdas, method), spec);
        },
        py::arg("times"), py::arg("lambdas"), py::arg("method") = "continuation",
        py::arg("width") = 900, py::arg("height") = 600, py::arg("mark_t_star") = false,
        py::arg("t") = 0.0,
        "Trajectory plot as an SVG document string.");

    m.def(
        "trajectory_csv",
        [](const Eigen::VectorXd& times, const Eigen::MatrixXcd& lambdas,
           const std::string& method) {
            std::ostringstream os;
            write_trajectory_csv(os, bundle_from_arrays(times, lambdas, method));
            return os.str();
        },
        py::arg("times"), py::arg("lambdas"), py::arg("method") = "continuation",
        "Trajectory bundle in the t,j,re,im,method CSV schema.");
}
