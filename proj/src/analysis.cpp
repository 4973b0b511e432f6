#include "rankone/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rankone/parallel.hpp"

namespace rankone {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Signed bound excess for E_{t,eps}: ratio of the left side to the bound,
// minus 1. Box failures map to +inf, a vacuous bound (eta = 0) to -1.
double elliptic_excess(Complex z, double ts, const DomainParams& p) {
    const double e = z.real();
    const double eta = z.imag();
    if (!(std::abs(e) < 3.0 && eta >= 0.0 && eta < p.t_cap)) return kInf;
    if (eta == 0.0) return -1.0;
    const double nd = static_cast<double>(p.n);
    const double lhs = e * e + (eta - ts) * (eta - ts);
    return lhs * nd * eta / std::pow(nd, p.epsilon) - 1.0;
}

double r_excess(Complex z, const DomainParams& p) {
    const double eta = z.imag();
    if (!(std::abs(z.real()) < 3.0 && eta >= 0.0)) return kInf;
    return eta / std::pow(static_cast<double>(p.n), -1.0 + p.zeta) - 1.0;
}

double hyperbolic_excess(Complex z, const DomainParams& p) {
    const double e = z.real();
    const double eta = z.imag();
    if (!(std::abs(e) < 3.0 && eta >= 0.0 && eta < p.t_cap)) return kInf;
    return eta * e * e / std::pow(static_cast<double>(p.n), -1.0 + p.epsilon) - 1.0;
}

}  // namespace

void DomainParams::validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("domain params: epsilon not in (0,1)");
    if (!(zeta > 0.0 && zeta < 1.0)) throw ConfigError("domain params: zeta not in (0,1)");
    if (!(t_cap >= 2.0)) throw ConfigError("domain params: t_cap must be >= 2");
    if (n < 1) throw ConfigError("domain params: n must be positive");
    if (!(t_max > 0.0)) throw ConfigError("domain params: t_max must be positive");
}

bool in_S(Complex z, const DomainParams& params) {
    params.validate();
    const double eta = z.imag();
    return std::abs(z.real()) < 3.0 &&
           eta >= std::pow(static_cast<double>(params.n), -1.0 + params.zeta) && eta < kEtaMax;
}

bool in_elliptic(Complex z, double t, const DomainParams& params) {
    params.validate();
    if (!(t > 0.0 && t < params.t_cap))
        throw DomainError("in_elliptic: t must lie in (0, t_cap)");
    const double e = z.real();
    const double eta = z.imag();
    if (!(std::abs(e) < 3.0 && eta >= 0.0 && eta < params.t_cap)) return false;
    if (eta == 0.0) return true;  // bound N^eps/(N eta) is vacuous
    const double ts = t_star(t);
    const double nd = static_cast<double>(params.n);
    return e * e + (eta - ts) * (eta - ts) < std::pow(nd, params.epsilon) / (nd * eta);
}

bool in_hyperbolic(Complex z, const DomainParams& params) {
    params.validate();
    const double e = z.real();
    const double eta = z.imag();
    if (!(std::abs(e) < 3.0 && eta >= 0.0 && eta < params.t_cap)) return false;
    return eta * e * e < std::pow(static_cast<double>(params.n), -1.0 + params.epsilon);
}

bool in_R(Complex z, const DomainParams& params) {
    params.validate();
    const double eta = z.imag();
    return std::abs(z.real()) < 3.0 && eta >= 0.0 &&
           eta < std::pow(static_cast<double>(params.n), -1.0 + params.zeta);
}

OutlierReport classify_outlier(const Eigen::VectorXcd& lambdas, double t,
                               const DomainParams& params) {
    params.validate();
    if (!(t > 1.0)) throw DomainError("classify_outlier: needs t > 1 so that t* > 0");
    const int count = static_cast<int>(lambdas.size());
    const double nd = static_cast<double>(params.n);

    OutlierReport rep;
    rep.t = t;
    rep.t_star = t_star(t);
    rep.disk_radius = std::pow(nd, params.epsilon / 4.0) / std::sqrt(nd * rep.t_star);
    rep.bulk_bound = std::pow(nd, params.epsilon) / (nd * rep.t_star * rep.t_star);

    const Complex disk_center{0.0, rep.t_star};
    int inside = 0;
    int inside_index = -1;
    for (int j = 0; j < count; ++j) {
        if (std::abs(lambdas[j] - disk_center) < rep.disk_radius) {
            ++inside;
            inside_index = j;
        }
    }
    rep.in_disk = inside == 1;
    if (rep.in_disk) {
        rep.outlier_index = inside_index;
        rep.outlier_value = lambdas[inside_index];
    }
    double max_im = 0.0;
    for (int j = 0; j < count; ++j) {
        if (rep.in_disk && j == rep.outlier_index) continue;
        max_im = std::max(max_im, lambdas[j].imag());
    }
    rep.bulk_max_im = max_im;
    rep.separated = rep.in_disk && rep.bulk_max_im < rep.bulk_bound;
    return rep;
}

ConfinementReport check_confinement(const TrajectoryBundle& bundle, const DomainParams& params) {
    params.validate();
    ConfinementReport rep;
    rep.worst_union_margin = -kInf;
    rep.worst_hyperbolic_margin = -kInf;
    for (std::size_t s = 0; s < bundle.grid.points.size(); ++s) {
        const double t = bundle.grid.points[s];
        if (!(t > 0.0 && t < params.t_cap)) {
            ++rep.skipped_times;
            continue;
        }
        const double ts = t_star(t);
        for (int j = 0; j < bundle.lambdas[s].size(); ++j) {
            const Complex z = bundle.lambdas[s][j];
            ++rep.checked;
            if (!(in_elliptic(z, t, params) || in_R(z, params))) ++rep.union_violations;
            if (!in_hyperbolic(z, params)) ++rep.hyperbolic_violations;
            rep.worst_union_margin = std::max(
                rep.worst_union_margin, std::min(elliptic_excess(z, ts, params), r_excess(z, params)));
            rep.worst_hyperbolic_margin =
                std::max(rep.worst_hyperbolic_margin, hyperbolic_excess(z, params));
        }
    }
    if (rep.checked == 0) {
        rep.worst_union_margin = 0.0;
        rep.worst_hyperbolic_margin = 0.0;
    }
    return rep;
}

SmallTReport small_t_check(const TrajectoryBundle& bundle, const DomainParams& params) {
    params.validate();
    const double nd = static_cast<double>(params.n);
    const double cutoff_a = 1.0 + std::pow(nd, -1.0 / 3.0 - params.epsilon);
    const double bound_a = std::pow(nd, -1.0 / 3.0 + params.epsilon);
    const double cutoff_b = 1.0 - std::pow(nd, -1.0 / 3.0 + params.epsilon);

    SmallTReport rep;
    rep.worst_margin_a = -kInf;
    rep.worst_margin_b = -kInf;
    for (std::size_t s = 0; s < bundle.grid.points.size(); ++s) {
        const double t = bundle.grid.points[s];
        if (t < cutoff_a) {
            for (int j = 0; j < bundle.lambdas[s].size(); ++j) {
                const double im = bundle.lambdas[s][j].imag();
                ++rep.checked_a;
                if (im >= bound_a) ++rep.violations_a;
                rep.worst_margin_a = std::max(rep.worst_margin_a, im / bound_a - 1.0);
            }
        }
        if (t > 0.0 && t < cutoff_b) {
            const double ts = t_star(t);
            const double bound_b = std::max(std::pow(nd, params.epsilon) / (nd * ts * ts),
                                            std::pow(nd, params.zeta) / nd);
            for (int j = 0; j < bundle.lambdas[s].size(); ++j) {
                const double im = bundle.lambdas[s][j].imag();
                ++rep.checked_b;
                if (im > bound_b) ++rep.violations_b;
                rep.worst_margin_b = std::max(rep.worst_margin_b, im / bound_b - 1.0);
            }
        }
    }
    if (rep.checked_a == 0) rep.worst_margin_a = 0.0;
    if (rep.checked_b == 0) rep.worst_margin_b = 0.0;
    return rep;
}

LargeTReport large_t_check(const TrajectoryBundle& bundle, const DomainParams& params) {
    params.validate();
    const double nd = static_cast<double>(params.n);
    LargeTReport rep;
    rep.outlier_tolerance = std::pow(nd, -0.5 + params.epsilon);
    rep.worst_bulk_margin = -kInf;
    std::int64_t bulk_checked = 0;
    for (std::size_t s = 0; s < bundle.grid.points.size(); ++s) {
        const double t = bundle.grid.points[s];
        if (!(t >= params.t_cap && t <= params.t_max)) continue;
        ++rep.checked_times;
        const Complex target{0.0, t_star(t)};
        int j_out = 0;
        for (int j = 1; j < bundle.lambdas[s].size(); ++j)
            if (bundle.lambdas[s][j].imag() > bundle.lambdas[s][j_out].imag()) j_out = j;
        const double dist = std::abs(bundle.lambdas[s][j_out] - target);
        rep.worst_outlier_distance = std::max(rep.worst_outlier_distance, dist);
        if (dist >= rep.outlier_tolerance) ++rep.outlier_violations;
        for (int j = 0; j < bundle.lambdas[s].size(); ++j) {
            if (j == j_out) continue;
            ++bulk_checked;
            if (!in_R(bundle.lambdas[s][j], params)) ++rep.bulk_violations;
            rep.worst_bulk_margin =
                std::max(rep.worst_bulk_margin, r_excess(bundle.lambdas[s][j], params));
        }
    }
    if (bulk_checked == 0) rep.worst_bulk_margin = 0.0;
    return rep;
}

OutlierLabel outlier_label(const TrajectoryBundle& bundle) {
    OutlierLabel label;
    if (bundle.lambdas.empty() || bundle.n() == 0) return label;
    const std::size_t last = bundle.lambdas.size() - 1;
    int j_out = 0;
    for (int j = 1; j < bundle.lambdas[last].size(); ++j)
        if (bundle.lambdas[last][j].imag() > bundle.lambdas[last][j_out].imag()) j_out = j;
    label.j_out = j_out;
    const double decade_start = bundle.grid.points[last] / 10.0;
    for (std::size_t s = 0; s < bundle.lambdas.size(); ++s) {
        if (bundle.grid.points[s] < decade_start) continue;
        int arg = 0;
        for (int j = 1; j < bundle.lambdas[s].size(); ++j)
            if (bundle.lambdas[s][j].imag() > bundle.lambdas[s][arg].imag()) arg = j;
        if (arg != j_out) {
            label.stable = false;
            break;
        }
    }
    return label;
}

EmergenceCurve emergence_scan(const RunConfig& config, const std::vector<double>& t_values,
                              int trials, const DomainParams& params) {
    if (trials < 1) throw ConfigError("emergence_scan: trials must be positive");
    DomainParams local = params;
    local.n = config.n;
    local.validate();

    EmergenceCurve curve;
    curve.t_values = t_values;
    curve.trials = trials;
    curve.n = config.n;
    curve.frequency.resize(t_values.size(), 0.0);

    for (std::size_t ti = 0; ti < t_values.size(); ++ti) {
        const double t = t_values[ti];
        if (t <= 1.0) continue;  // no positive t*, nothing can separate
        std::vector<char> separated(static_cast<std::size_t>(trials), 0);
        std::vector<std::string> errors(static_cast<std::size_t>(trials));
        parallel_for(trials, [&](int trial) {
            RunConfig c = config;
            c.seed = config.seed + static_cast<std::uint64_t>(trial);
            try {
                const SampledSystem sys = sample_system(c);
                const ResolventInput rin = ResolventInput::from(sys.spec);
                const TimeGrid grid = TimeGrid::refined_near_resonance(t, 0.05, 5);
                const TrajectoryBundle bundle = trace_trajectories(rin, grid);
                const OutlierReport rep = classify_outlier(bundle.lambdas.back(), t, local);
                separated[static_cast<std::size_t>(trial)] = rep.separated ? 1 : 0;
            } catch (const std::exception& err) {
                std::ostringstream msg;
                msg << "t=" << t << " trial=" << trial << ": " << err.what();
                errors[static_cast<std::size_t>(trial)] = msg.str();
            }
        });
        int hits = 0;
        for (int trial = 0; trial < trials; ++trial) {
            hits += separated[static_cast<std::size_t>(trial)];
            if (!errors[static_cast<std::size_t>(trial)].empty())
                curve.failures.push_back(errors[static_cast<std::size_t>(trial)]);
        }
        curve.frequency[ti] = static_cast<double>(hits) / trials;
    }
    return curve;
}

OriginHistogram origin_histogram(const RunConfig& config, int trials, double t_final) {
    if (trials < 1) throw ConfigError("origin_histogram: trials must be positive");
    if (!(t_final > 1.0)) throw ConfigError("origin_histogram: t_final must exceed 1");

    OriginHistogram hist;
    hist.n = config.n;
    hist.trials = trials;
    hist.t_final = t_final;
    hist.counts.assign(static_cast<std::size_t>(config.n), 0);

    std::vector<int> ranks(static_cast<std::size_t>(trials), -1);
    std::vector<char> stable(static_cast<std::size_t>(trials), 0);
    std::vector<std::string> errors(static_cast<std::size_t>(trials));
    parallel_for(trials, [&](int trial) {
        RunConfig c = config;
        c.seed = config.seed + static_cast<std::uint64_t>(trial);
        try {
            const SampledSystem sys = sample_system(c);
            const ResolventInput rin = ResolventInput::from(sys.spec);
            const TimeGrid grid = TimeGrid::refined_near_resonance(t_final, 0.05, 5);
            const TrajectoryBundle bundle = trace_trajectories(rin, grid);
            const OutlierLabel label = outlier_label(bundle);
            ranks[static_cast<std::size_t>(trial)] = label.j_out;
            stable[static_cast<std::size_t>(trial)] = label.stable ? 1 : 0;
        } catch (const std::exception& err) {
            std::ostringstream msg;
            msg << "trial=" << trial << ": " << err.what();
            errors[static_cast<std::size_t>(trial)] = msg.str();
        }
    });
    for (int trial = 0; trial < trials; ++trial) {
        const int rank = ranks[static_cast<std::size_t>(trial)];
        if (rank >= 0) {
            hist.counts[static_cast<std::size_t>(rank)] += 1;
            hist.origin_ranks.push_back(rank);
            hist.center_distances.push_back(std::abs(rank - (config.n - 1) / 2.0));
            hist.label_stable.push_back(stable[static_cast<std::size_t>(trial)]);
        } else {
            hist.failures.push_back(errors[static_cast<std::size_t>(trial)]);
        }
    }
    return hist;
}

}  // namespace rankone
