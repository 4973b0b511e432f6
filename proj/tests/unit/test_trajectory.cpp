#include <doctest.h>

#include <rankone/rmt.hpp>
#include <rankone/rng.hpp>
#include <rankone/trajectory.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

using namespace rankone;

namespace {

const double kRoot3 = std::sqrt(3.0);

ResolventInput symmetric_pair() {
    ResolventInput rin;
    rin.mus = Eigen::VectorXd(2);
    rin.mus << -1.0, 1.0;
    rin.weights = Eigen::VectorXd(2);
    rin.weights << 0.5, 0.5;
    return rin;
}

// Roots of z^2 - itz - 1 = 0, the symmetric-pair spectrum: (it +- sqrt(4-t^2))/2.
std::pair<Complex, Complex> symmetric_pair_roots(double t) {
    Complex disc = std::sqrt(Complex(4.0 - t * t, 0.0));
    if (t > 2.0) disc = Complex(0.0, std::sqrt(t * t - 4.0));
    Complex it(0.0, t);
    return {0.5 * (it + disc), 0.5 * (it - disc)};
}

ResolventInput gue_input(int n, std::uint64_t seed) {
    RunConfig cfg;
    cfg.n = n;
    cfg.seed = seed;
    return ResolventInput::from(sample_system(cfg).spec);
}

}  // namespace

TEST_CASE("time grids validate their contract") {
    TimeGrid grid = TimeGrid::uniform(2.0, 0.05);
    CHECK(grid.points.front() == 0.0);
    CHECK(grid.t_end() == doctest::Approx(2.0));
    CHECK_NOTHROW(grid.validate());

    TimeGrid bad = grid;
    bad.points[0] = 0.01;
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    bad = grid;
    bad.points[3] = bad.points[2];
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    bad = grid;
    bad.dt_max = 0.01;
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    CHECK_THROWS_AS(TimeGrid::uniform(-1.0, 0.1), ConfigError);
    CHECK_THROWS_AS(TimeGrid::uniform(1.0, 0.0), ConfigError);
}

TEST_CASE("refined grids subdivide the window around t = 1") {
    TimeGrid coarse = TimeGrid::uniform(2.0, 0.05);
    TimeGrid fine = TimeGrid::refined_near_resonance(2.0, 0.05, 5);
    CHECK_NOTHROW(fine.validate());
    auto count_in = [](const TimeGrid& g, double lo, double hi) {
        return std::count_if(g.points.begin(), g.points.end(),
                             [&](double t) { return t >= lo && t <= hi; });
    };
    CHECK(count_in(fine, 0.85, 1.15) > 3 * count_in(coarse, 0.85, 1.15));
    // Outside the window the base spacing survives.
    CHECK(count_in(fine, 1.5, 2.0) == count_in(coarse, 1.5, 2.0));
}

TEST_CASE("secular vanishes on the symmetric-pair spectrum at t = 1") {
    ResolventInput rin = symmetric_pair();
    CHECK(std::abs(secular(rin, 1.0, Complex(kRoot3 / 2, 0.5))) <= 1e-12);
    CHECK(std::abs(secular(rin, 1.0, Complex(-kRoot3 / 2, 0.5))) <= 1e-12);
    CHECK(std::abs(secular(rin, 1.0, Complex(0.0, 1e6)) - 1.0) <= 1e-5);
    CHECK_THROWS_AS(secular(rin, 0.0, Complex(0.0, 1.0)), DomainError);
}

TEST_CASE("track_step leaves t = 0 along the exact initial velocities") {
    ResolventInput rin = symmetric_pair();
    Eigen::VectorXcd start(2);
    start << Complex(-1.0, 0.0), Complex(1.0, 0.0);
    const double dt = 1e-3;
    TraceOptions opts;
    StepResult res = track_step(rin, start, 0.0, dt, opts);
    REQUIRE(res.status == StepStatus::Ok);
    // lambda_j(dt) = mu_j + i dt c_j + O(dt^2).
    CHECK(std::abs(res.lambdas[0] - Complex(-1.0, 0.5 * dt)) <= 5.0 * dt * dt);
    CHECK(std::abs(res.lambdas[1] - Complex(1.0, 0.5 * dt)) <= 5.0 * dt * dt);
    CHECK(res.min_distance > 1.0);
}

TEST_CASE("continuation reaches the symmetric-pair closed form at t = 1") {
    ResolventInput rin = symmetric_pair();
    TrajectoryBundle bundle = trace_trajectories(rin, TimeGrid::uniform(1.0, 0.01));
    const Eigen::VectorXcd& last = bundle.lambdas.back();
    CHECK(std::abs(last[0] - Complex(-kRoot3 / 2, 0.5)) <= 1e-10);
    CHECK(std::abs(last[1] - Complex(kRoot3 / 2, 0.5)) <= 1e-10);
    CHECK(bundle.method == "continuation");
}

TEST_CASE("a single trajectory is mu + it") {
    ResolventInput rin;
    rin.mus = Eigen::VectorXd::Constant(1, 0.37);
    rin.weights = Eigen::VectorXd::Constant(1, 1.0);
    TrajectoryBundle bundle = trace_trajectories(rin, TimeGrid::uniform(2.0, 0.1));
    for (int s = 0; s < bundle.grid.size(); ++s) {
        Complex expect(0.37, bundle.grid.points[s]);
        CHECK(std::abs(bundle.lambdas[s][0] - expect) <= 1e-12);
    }
}

TEST_CASE("symmetric pair matches the closed form up to t = 1.8") {
    ResolventInput rin = symmetric_pair();
    TrajectoryBundle bundle = trace_trajectories(rin, TimeGrid::uniform(1.8, 0.01));
    for (int s = 1; s < bundle.grid.size(); ++s) {
        auto [hi, lo] = symmetric_pair_roots(bundle.grid.points[s]);
        CHECK(std::abs(bundle.lambdas[s][1] - hi) <= 1e-8);
        CHECK(std::abs(bundle.lambdas[s][0] - lo) <= 1e-8);
    }
}

TEST_CASE("symmetric pair beyond the degeneracy either resolves or reports the collision") {
    // At t = 2 the two roots meet at z = i: an exact measure-zero collision.
    ResolventInput rin = symmetric_pair();
    try {
        TrajectoryBundle bundle = trace_trajectories(rin, TimeGrid::uniform(3.0, 0.01));
        for (int s = 1; s < bundle.grid.size(); ++s) {
            double t = bundle.grid.points[s];
            if (t > 1.95 && t < 2.05) continue;
            auto [hi, lo] = symmetric_pair_roots(t);
            double d = matched_max_distance(bundle.lambdas[s],
                                            (Eigen::VectorXcd(2) << lo, hi).finished());
            CHECK(d <= 1e-6);
        }
    } catch (const CollisionError& e) {
        CHECK(e.t > 1.9);
        CHECK(e.t < 2.1);
    }
}

TEST_CASE("trace identity holds along a GUE n=20 run") {
    ResolventInput rin = gue_input(20, 3);
    TrajectoryBundle bundle = trace_trajectories(rin, TimeGrid::refined_near_resonance(2.0, 0.05));
    const double mu_sum = rin.mus.sum();
    for (int s = 0; s < bundle.grid.size(); ++s) {
        Complex target(mu_sum, bundle.grid.points[s]);
        CHECK(std::abs(bundle.lambdas[s].sum() - target) <= 1e-9);
    }
    CHECK_NOTHROW(bundle.validate(rin, 1e-9));
    CHECK(bundle.min_pair_distance() > 0.0);
    REQUIRE(bundle.diagnostics.size() == bundle.lambdas.size());
    CHECK(bundle.diagnostics.front().t == 0.0);
    CHECK(bundle.diagnostics.back().t == doctest::Approx(2.0));
}

TEST_CASE("continuation agrees with the polynomial oracle on GUE n=20") {
    ResolventInput rin = gue_input(20, 4);
    TrajectoryBundle bundle = trace_trajectories(rin, TimeGrid::uniform(1.5, 0.01));
    for (double t : {0.5, 1.0, 1.5}) {
        int s = static_cast<int>(std::lround(t / 0.01));
        REQUIRE(bundle.grid.points[s] == doctest::Approx(t));
        Eigen::VectorXcd oracle = oracle_eigen(rin.mus, rin.weights, t);
        CHECK(matched_max_distance(bundle.lambdas[s], oracle) <= 1e-8);
    }
}

TEST_CASE("eigenvalues sit on the zero level line of Re W") {
    ResolventInput rin = gue_input(20, 6);
    TrajectoryBundle bundle = trace_trajectories(rin, TimeGrid::uniform(2.0, 0.05));
    for (double t : {1.0, 2.0}) {
        int s = static_cast<int>(std::lround(t / 0.05));
        REQUIRE(bundle.grid.points[s] == doctest::Approx(t));
        for (int j = 0; j < 20; ++j) {
            Complex w = weighted_resolvent(rin, bundle.lambdas[s][j]);
            CHECK(std::abs(w.real()) <= 1e-10);
        }
    }
}

TEST_CASE("bundle validation flags tampered states") {
    ResolventInput rin = gue_input(8, 7);
    TrajectoryBundle bundle = trace_trajectories(rin, TimeGrid::uniform(1.0, 0.05));
    CHECK_NOTHROW(bundle.validate(rin, 1e-9));

    TrajectoryBundle bad = bundle;
    bad.lambdas.back()[0] = Complex(bad.lambdas.back()[0].real(), -1e-3);
    CHECK_THROWS_AS(bad.validate(rin, 1e-9), Error);

    bad = bundle;
    bad.lambdas.back()[0] += Complex(0.0, 1e-6);
    CHECK_THROWS_AS(bad.validate(rin, 1e-9), Error);
}

TEST_CASE("ode_rhs reproduces the initial velocities at t = 0") {
    Eigen::VectorXcd lambdas(2);
    lambdas << Complex(-1.0, 0.0), Complex(1.0, 0.0);
    Eigen::VectorXd weights(2);
    weights << 0.5, 0.5;
    Eigen::VectorXcd v = ode_rhs(lambdas, 0.0, weights);
    CHECK(std::abs(v[0] - Complex(0.0, 0.5)) <= 1e-15);
    CHECK(std::abs(v[1] - Complex(0.0, 0.5)) <= 1e-15);

    Eigen::VectorXd missing;
    CHECK_THROWS_AS(ode_rhs(lambdas, 0.0, missing), ConfigError);
}

TEST_CASE("ode_rhs matches the hand value on the symmetric pair at t = 1") {
    Eigen::VectorXcd lambdas(2);
    lambdas << Complex(kRoot3 / 2, 0.5), Complex(-kRoot3 / 2, 0.5);
    Eigen::VectorXd weights;
    Eigen::VectorXcd v = ode_rhs(lambdas, 1.0, weights);
    // (i/2)(1 + i/sqrt(3)) = -1/(2 sqrt 3) + i/2, and its mirror image.
    Complex expect(-0.28867513459481287, 0.5);
    CHECK(std::abs(v[0] - expect) <= 1e-14);
    CHECK(std::abs(v[1] - Complex(-expect.real(), expect.imag())) <= 1e-14);
    // Cross-check against the time derivative of the closed form
    // (it + sqrt(4-t^2))/2: derivative (i - t/sqrt(4-t^2))/2 at t = 1.
    Complex analytic(0.5 * (-1.0 / kRoot3), 0.5);
    CHECK(std::abs(v[0] - analytic) <= 1e-14);
}

TEST_CASE("ode_rhs single trajectory has the empty-product velocity") {
    Eigen::VectorXcd lambdas(1);
    lambdas << Complex(0.3, 0.2);
    Eigen::VectorXd weights;
    Eigen::VectorXcd v = ode_rhs(lambdas, 0.4, weights);
    CHECK(std::abs(v[0] - Complex(0.0, 0.5)) <= 1e-15);
}

TEST_CASE("ode_rhs refuses degenerate configurations") {
    Eigen::VectorXcd lambdas(2);
    lambdas << Complex(0.5, 0.1), Complex(0.5 + 1e-13, 0.1);
    Eigen::VectorXd weights;
    CHECK_THROWS_AS(ode_rhs(lambdas, 1.0, weights), SingularityError);
    CHECK_THROWS_AS(ode_rhs(lambdas, -0.5, weights), DomainError);
}

TEST_CASE("RK4 integration shows fourth-order convergence on the closed form") {
    ResolventInput rin = symmetric_pair();
    TimeGrid grid = TimeGrid::uniform(1.0, 0.05);
    auto err_at = [&](double dt) {
        TrajectoryBundle bundle = integrate_ode(rin, grid, dt);
        auto [hi, lo] = symmetric_pair_roots(1.0);
        return std::max(std::abs(bundle.lambdas.back()[1] - hi),
                        std::abs(bundle.lambdas.back()[0] - lo));
    };
    double coarse = err_at(4e-3);
    double fine = err_at(2e-3);
    CHECK(coarse / fine > 8.0);
    CHECK(coarse / fine < 32.0);
}

TEST_CASE("integrate_ode matches the closed form and the trace identity") {
    ResolventInput rin = symmetric_pair();
    TrajectoryBundle bundle = integrate_ode(rin, TimeGrid::uniform(1.8, 0.05), 1e-3);
    CHECK(bundle.method == "ode");
    for (int s = 0; s < bundle.grid.size(); ++s) {
        double t = bundle.grid.points[s];
        auto [hi, lo] = symmetric_pair_roots(t);
        if (t > 0.0) {
            CHECK(std::abs(bundle.lambdas[s][1] - hi) <= 1e-6);
            CHECK(std::abs(bundle.lambdas[s][0] - lo) <= 1e-6);
        }
        CHECK(std::abs(bundle.lambdas[s].sum() - Complex(0.0, t)) <= 1e-7);
    }
}

TEST_CASE("integrate_ode tracks the continuation on GUE n=20") {
    ResolventInput rin = gue_input(20, 5);
    TimeGrid grid = TimeGrid::refined_near_resonance(1.5, 0.05);
    TrajectoryBundle newton = trace_trajectories(rin, grid);
    TrajectoryBundle ode = integrate_ode(rin, grid, 5e-4);
    double worst = 0.0;
    for (int s = 0; s < grid.size(); ++s)
        worst = std::max(worst, (newton.lambdas[s] - ode.lambdas[s]).cwiseAbs().maxCoeff());
    CHECK(worst <= 1e-5);
}

TEST_CASE("oracle_eigen solves the symmetric pair at t = 1") {
    ResolventInput rin = symmetric_pair();
    Eigen::VectorXcd roots = oracle_eigen(rin.mus, rin.weights, 1.0);
    Eigen::VectorXcd expect(2);
    expect << Complex(kRoot3 / 2, 0.5), Complex(-kRoot3 / 2, 0.5);
    CHECK(matched_max_distance(roots, expect) <= 1e-10);
}

TEST_CASE("oracle_eigen at t = 0 returns the poles") {
    ResolventInput rin = gue_input(12, 9);
    Eigen::VectorXcd roots = oracle_eigen(rin.mus, rin.weights, 0.0);
    Eigen::VectorXcd expect = rin.mus.cast<Complex>();
    CHECK(matched_max_distance(roots, expect) <= 1e-12);
}

TEST_CASE("oracle_eigen decouples when all weight sits on one eigenvector") {
    Eigen::VectorXd mus(2);
    mus << -0.4, 0.9;
    Eigen::VectorXd weights(2);
    weights << 1.0, 0.0;
    Eigen::VectorXcd roots = oracle_eigen(mus, weights, 0.7);
    Eigen::VectorXcd expect(2);
    expect << Complex(-0.4, 0.7), Complex(0.9, 0.0);
    CHECK(matched_max_distance(roots, expect) <= 1e-10);
}

TEST_CASE("oracle_eigen enforces the desk-scale cap") {
    Eigen::VectorXd mus = Eigen::VectorXd::LinSpaced(65, -2.0, 2.0);
    Eigen::VectorXd weights = Eigen::VectorXd::Constant(65, 1.0 / 65);
    CHECK_THROWS_AS(oracle_eigen(mus, weights, 1.0), ConfigError);
}

TEST_CASE("limit_points of the symmetric pair is the origin") {
    HermitianMatrix H;
    H.entries = Eigen::MatrixXcd::Zero(2, 2);
    H.entries(0, 0) = -1.0;
    H.entries(1, 1) = 1.0;
    UnitVector v;
    v.entries = Eigen::VectorXcd::Constant(2, Complex(1.0 / std::sqrt(2.0), 0.0));
    LimitPoints lp = limit_points(H, v);
    REQUIRE(lp.values.size() == 1);
    CHECK(std::abs(lp.values[0]) <= 1e-14);
}

TEST_CASE("limit_points along an eigenvector drops exactly that eigenvalue") {
    HermitianMatrix H = sample_gue(6, 10);
    auto [mus, vecs] = hermitian_eigen(H);
    UnitVector v;
    v.entries = vecs.col(0);
    LimitPoints lp = limit_points(H, v);
    REQUIRE(lp.values.size() == 5);
    for (int j = 0; j < 5; ++j) CHECK(lp.values[j] == doctest::Approx(mus(j + 1)).epsilon(1e-10));
}

TEST_CASE("limit_points interlace the spectrum") {
    RunConfig cfg;
    cfg.n = 20;
    cfg.seed = 11;
    SampledSystem sys = sample_system(cfg);
    LimitPoints lp = limit_points(sys.H, sys.v);
    REQUIRE(lp.values.size() == 19);
    for (int j = 0; j < 19; ++j) {
        CHECK(lp.values[j] >= sys.spec.mus(j) - 1e-12);
        CHECK(lp.values[j] <= sys.spec.mus(j + 1) + 1e-12);
    }
}

TEST_CASE("large-t run converges to the limit points with one divergent trajectory") {
    RunConfig cfg;
    cfg.n = 20;
    cfg.seed = 12;
    SampledSystem sys = sample_system(cfg);
    ResolventInput rin = ResolventInput::from(sys.spec);
    TrajectoryBundle bundle = trace_trajectories(rin, TimeGrid::uniform(1000.0, 0.25));
    const Eigen::VectorXcd& last = bundle.lambdas.back();

    int j_out = 0;
    for (int j = 1; j < 20; ++j)
        if (last[j].imag() > last[j_out].imag()) j_out = j;
    CHECK(last[j_out].imag() >= 998.0);
    CHECK(last[j_out].imag() <= 1002.0);

    std::vector<double> rest;
    for (int j = 0; j < 20; ++j)
        if (j != j_out) rest.push_back(last[j].real());
    std::sort(rest.begin(), rest.end());
    LimitPoints lp = limit_points(sys.H, sys.v);
    for (int j = 0; j < 19; ++j) CHECK(std::abs(rest[j] - lp.values[j]) <= 5e-3);
}

TEST_CASE("min_cost_matching recovers a shuffled assignment") {
    SplitMix64 gen(20);
    const int n = 12;
    Eigen::VectorXcd a(n);
    for (int j = 0; j < n; ++j) a[j] = Complex(gen.uniform() * 10.0, gen.uniform() * 10.0);
    std::vector<int> order(n);
    for (int j = 0; j < n; ++j) order[j] = (j * 5 + 3) % n;
    Eigen::VectorXcd b(n);
    for (int j = 0; j < n; ++j) b[order[j]] = a[j] + Complex(1e-6 * gen.uniform(), 0.0);
    std::vector<int> perm = min_cost_matching(a, b);
    for (int j = 0; j < n; ++j) CHECK(perm[j] == order[j]);
    CHECK(matched_max_distance(a, b) <= 1e-6);
}
