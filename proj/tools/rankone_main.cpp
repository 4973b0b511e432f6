// Command-line front end: trace trajectories, scan outlier emergence,
// measure local-law errors, histogram outlier origins. Every run writes CSV
// data plus a JSON metadata sidecar; trace also emits an SVG figure.
//
// Exit codes: 0 success, 2 usage error, 1 numeric failure (JSON error
// report on stderr).

#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rankone/analysis.hpp"
#include "rankone/io.hpp"
#include "rankone/rng.hpp"
#include "rankone/svg.hpp"

namespace {

using rankone::Complex;

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw rankone::Error("cannot open output file: " + path);
    out << body;
    if (!out) throw rankone::Error("write failed: " + path);
}

std::string json_body(const nlohmann::json& j) { return j.dump(2) + "\n"; }

struct TraceArgs {
    int n = 100;
    std::string ensemble = "gue";
    std::uint64_t seed = 42;
    double t_max = 3.0;
    int steps = 60;
    std::string method = "continuation";
    std::string out = "trace";
};

// A 1x1 "matrix" is below the sampler's n >= 2 contract but makes a useful
// smoke case (the trajectory is exactly mu + it); built here by hand.
rankone::ResolventInput scalar_system(std::uint64_t seed) {
    rankone::SplitMix64 root(seed);
    rankone::ResolventInput rin;
    rin.mus = Eigen::VectorXd::Constant(1, root.normal());
    rin.weights = Eigen::VectorXd::Constant(1, 1.0);
    return rin;
}

int run_trace(const TraceArgs& args) {
    if (args.method != "continuation" && args.method != "ode" && args.method != "both")
        throw rankone::ConfigError("trace: --method must be continuation, ode, or both");

    rankone::RunConfig config;
    config.n = args.n;
    config.ensemble = rankone::ensemble_from_string(args.ensemble);
    config.seed = args.seed;

    rankone::ResolventInput rin;
    if (args.n == 1) {
        rin = scalar_system(args.seed);
    } else {
        const rankone::SampledSystem sys = rankone::sample_system(config);
        rin = rankone::ResolventInput::from(sys.spec);
    }

    const rankone::TimeGrid grid = rankone::TimeGrid::uniform(args.t_max, args.t_max / args.steps);
    nlohmann::json meta = rankone::run_metadata(config);
    meta["t_max"] = args.t_max;
    meta["steps"] = args.steps;
    meta["method"] = args.method;

    std::optional<rankone::TrajectoryBundle> cont;
    std::optional<rankone::TrajectoryBundle> ode;
    if (args.method != "ode") cont = rankone::trace_trajectories(rin, grid);
    if (args.method != "continuation") ode = rankone::integrate_ode(rin, grid, 5e-4);

    if (args.method == "both") {
        std::ostringstream c1, c2;
        rankone::write_trajectory_csv(c1, *cont);
        rankone::write_trajectory_csv(c2, *ode);
        write_file(args.out + ".continuation.csv", c1.str());
        write_file(args.out + ".ode.csv", c2.str());
        double dev = 0.0;
        for (std::size_t s = 0; s < cont->lambdas.size(); ++s)
            for (int j = 0; j < cont->lambdas[s].size(); ++j)
                dev = std::max(dev, std::abs(cont->lambdas[s][j] - ode->lambdas[s][j]));
        meta["method_max_deviation"] = dev;
    } else {
        std::ostringstream csv;
        rankone::write_trajectory_csv(csv, cont ? *cont : *ode);
        write_file(args.out + ".csv", csv.str());
    }

    const rankone::TrajectoryBundle& primary = cont ? *cont : *ode;
    meta["diagnostics"] = primary.diagnostics;
    meta["min_pair_distance"] = primary.min_pair_distance();

    rankone::PlotSpec spec;
    if (args.t_max > 1.0) {
        spec.mark_t_star = true;
        spec.t = args.t_max;
    }
    write_file(args.out + ".svg", rankone::render_svg(primary, spec));
    write_file(args.out + ".meta.json", json_body(meta));
    return 0;
}

struct ScanArgs {
    int n = 200;
    int trials = 20;
    std::string t_grid;  // comma-separated; empty = default multiples of n^{-1/3}
    double epsilon = 0.3;
    double zeta = 0.2;
    std::uint64_t seed = 1;
    std::string out = "emergence";
};

int run_outlier_scan(const ScanArgs& args) {
    rankone::RunConfig config;
    config.n = args.n;
    config.seed = args.seed;

    std::vector<double> ts;
    if (args.t_grid.empty()) {
        const double unit = std::pow(static_cast<double>(args.n), -1.0 / 3.0);
        for (const double mult : {0.1, 0.5, 1.0, 2.0, 5.0}) ts.push_back(1.0 + mult * unit);
    } else {
        std::stringstream parse(args.t_grid);
        std::string tok;
        while (std::getline(parse, tok, ',')) {
            if (tok.empty()) continue;
            ts.push_back(std::stod(tok));
        }
        if (ts.empty()) throw rankone::ConfigError("outlier-scan: empty --t-grid");
    }

    rankone::DomainParams params;
    params.epsilon = args.epsilon;
    params.zeta = args.zeta;
    params.n = args.n;
    params.t_cap = std::max(2.0, ts.back() + 1.0);

    const rankone::EmergenceCurve curve =
        rankone::emergence_scan(config, ts, args.trials, params);

    std::ostringstream csv;
    rankone::write_emergence_csv(csv, curve);
    write_file(args.out + ".csv", csv.str());

    nlohmann::json meta = rankone::run_metadata(config);
    meta["params"] = params;
    meta["curve"] = curve;
    write_file(args.out + ".json", json_body(meta));
    return 0;
}

struct LocalLawArgs {
    int n = 1000;
    std::uint64_t seed = 1;
    double zeta = 0.1;
    int e_points = 10;
    int eta_points = 5;
    double e_max = 2.5;
    bool fixture = false;
    std::string out = "locallaw";
};

int run_local_law(const LocalLawArgs& args) {
    rankone::ResolventInput rin;
    std::int64_t n = args.n;
    rankone::RunConfig config;
    config.seed = args.seed;

    std::vector<Complex> grid;
    if (args.fixture) {
        // Two-point toy spectrum with the hand-checked value at z = i.
        rin.mus = Eigen::VectorXd(2);
        rin.mus << -1.0, 1.0;
        rin.weights = Eigen::VectorXd::Constant(2, 0.5);
        n = 2;
        config.n = 2;
        grid.emplace_back(0.0, 1.0);
    } else {
        config.n = args.n;
        config.ensemble = rankone::Ensemble::Gue;
        const rankone::SampledSystem sys = rankone::sample_system(config);
        rin = rankone::ResolventInput::from(sys.spec);
        if (args.e_points < 1 || args.eta_points < 1)
            throw rankone::ConfigError("local-law: grid must contain at least one point");
        const double nd = static_cast<double>(args.n);
        const double eta_lo = std::pow(nd, -0.9);
        const double eta_hi = 1.0;
        for (int ke = 0; ke < args.e_points; ++ke) {
            const double e = args.e_points == 1
                                 ? 0.0
                                 : -args.e_max + 2.0 * args.e_max * ke / (args.e_points - 1);
            for (int kh = 0; kh < args.eta_points; ++kh) {
                const double frac =
                    args.eta_points == 1 ? 0.0 : static_cast<double>(kh) / (args.eta_points - 1);
                const double eta = eta_lo * std::pow(eta_hi / eta_lo, frac);
                grid.emplace_back(e, eta);
            }
        }
    }

    const rankone::LocalLawReport report =
        rankone::local_law_error(rin, grid, n, args.zeta);

    std::ostringstream csv;
    rankone::write_local_law_csv(csv, report);
    write_file(args.out + ".csv", csv.str());

    nlohmann::json meta = rankone::run_metadata(config);
    meta["zeta"] = args.zeta;
    meta["fixture"] = args.fixture;
    meta["report"] = report;
    write_file(args.out + ".json", json_body(meta));
    return 0;
}

struct OriginArgs {
    int n = 100;
    int trials = 50;
    double t_final = 10.0;
    std::uint64_t seed = 1;
    std::string out = "origin";
};

int run_origin_hist(const OriginArgs& args) {
    rankone::RunConfig config;
    config.n = args.n;
    config.seed = args.seed;

    const rankone::OriginHistogram hist =
        rankone::origin_histogram(config, args.trials, args.t_final);

    std::ostringstream csv;
    rankone::write_origin_csv(csv, hist);
    write_file(args.out + ".csv", csv.str());

    nlohmann::json meta = rankone::run_metadata(config);
    meta["histogram"] = hist;
    write_file(args.out + ".json", json_body(meta));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Eigenvalue trajectories of a Wigner matrix under a rank-one "
                 "imaginary perturbation"};
    app.require_subcommand(1);

    TraceArgs trace;
    CLI::App* trace_cmd = app.add_subcommand("trace", "Trace all n eigenvalue trajectories");
    trace_cmd->add_option("--n", trace.n, "matrix dimension")->check(CLI::PositiveNumber);
    trace_cmd->add_option("--ensemble", trace.ensemble, "gue | wigner-real | wigner-complex-uniform");
    trace_cmd->add_option("--seed", trace.seed, "rng seed");
    trace_cmd->add_option("--t-max", trace.t_max, "final time")->check(CLI::PositiveNumber);
    trace_cmd->add_option("--steps", trace.steps, "grid steps")->check(CLI::PositiveNumber);
    trace_cmd->add_option("--method", trace.method, "continuation | ode | both");
    trace_cmd->add_option("--out", trace.out, "output prefix");

    ScanArgs scan;
    CLI::App* scan_cmd = app.add_subcommand("outlier-scan", "Outlier separation frequency vs t");
    scan_cmd->add_option("--n", scan.n, "matrix dimension")->check(CLI::PositiveNumber);
    scan_cmd->add_option("--trials", scan.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    scan_cmd->add_option("--t-grid", scan.t_grid, "comma-separated t values");
    scan_cmd->add_option("--epsilon", scan.epsilon, "domain exponent epsilon");
    scan_cmd->add_option("--zeta", scan.zeta, "domain exponent zeta");
    scan_cmd->add_option("--seed", scan.seed, "base seed (trial i uses seed+i)");
    scan_cmd->add_option("--out", scan.out, "output prefix");

    LocalLawArgs law;
    CLI::App* law_cmd = app.add_subcommand("local-law", "Measure |W - m| over a spectral grid");
    law_cmd->add_option("--n", law.n, "matrix dimension")->check(CLI::PositiveNumber);
    law_cmd->add_option("--seed", law.seed, "rng seed");
    law_cmd->add_option("--zeta", law.zeta, "strip exponent");
    law_cmd->add_option("--e-points", law.e_points, "real-axis grid points");
    law_cmd->add_option("--eta-points", law.eta_points, "log-spaced eta points");
    law_cmd->add_option("--e-max", law.e_max, "|Re z| range");
    law_cmd->add_flag("--fixture", law.fixture, "use the fixed 2-point toy spectrum");
    law_cmd->add_option("--out", law.out, "output prefix");

    OriginArgs origin;
    CLI::App* origin_cmd = app.add_subcommand("origin-hist", "Histogram of outlier origin ranks");
    origin_cmd->add_option("--n", origin.n, "matrix dimension")->check(CLI::PositiveNumber);
    origin_cmd->add_option("--trials", origin.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    origin_cmd->add_option("--t-final", origin.t_final, "labeling time");
    origin_cmd->add_option("--seed", origin.seed, "base seed (trial i uses seed+i)");
    origin_cmd->add_option("--out", origin.out, "output prefix");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& err) {
        return app.exit(err);
    } catch (const CLI::ParseError& err) {
        app.exit(err);
        return 2;
    }

    try {
        if (trace_cmd->parsed()) return run_trace(trace);
        if (scan_cmd->parsed()) return run_outlier_scan(scan);
        if (law_cmd->parsed()) return run_local_law(law);
        if (origin_cmd->parsed()) return run_origin_hist(origin);
    } catch (const rankone::ConfigError& err) {
        std::cerr << "usage error: " << err.what() << "\n";
        return 2;
    } catch (const rankone::CollisionError& err) {
        nlohmann::json report{{"error", err.what()},
                              {"type", "collision"},
                              {"j", err.j},
                              {"k", err.k},
                              {"t", err.t}};
        std::cerr << report.dump(2) << "\n";
        return 1;
    } catch (const std::exception& err) {
        nlohmann::json report{{"error", err.what()}, {"type", "numeric"}};
        std::cerr << report.dump(2) << "\n";
        return 1;
    }
    return 0;
}
