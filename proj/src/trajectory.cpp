#include "rankone/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rankone/parallel.hpp"

namespace rankone {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Gap below which the ODE right-hand side is treated as singular.
constexpr double kOdeGapTol = 1e-12;

double min_pair_gap(const Eigen::VectorXcd& z) {
    const int n = static_cast<int>(z.size());
    double best = kInf;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) best = std::min(best, std::abs(z[i] - z[j]));
    return best;
}

void closest_pair(const Eigen::VectorXcd& z, int& aj, int& ak) {
    const int n = static_cast<int>(z.size());
    double best = kInf;
    aj = 0;
    ak = n > 1 ? 1 : 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double d = std::abs(z[i] - z[j]);
            if (d < best) {
                best = d;
                aj = i;
                ak = j;
            }
        }
}

std::string dump_state(const Eigen::VectorXcd& z) {
    std::ostringstream out;
    out.precision(17);
    const int n = static_cast<int>(z.size());
    const int shown = std::min(n, 16);
    for (int j = 0; j < shown; ++j) {
        out << (j ? "; " : "") << "lambda_" << j << "=(" << z[j].real() << "," << z[j].imag()
            << ")";
    }
    if (shown < n) out << "; ... (" << n << " roots total)";
    return out.str();
}

// One evaluation of the Newton target f(z) = W(z) - i/t together with
// f' = W'(z), the distance to the nearest pole, and the magnitude sum that
// bounds the attainable residual (roundoff floor ~ eps * scale).
struct FEval {
    Complex f;
    Complex fprime;
    double min_dist = kInf;
    double scale = 0.0;
};

FEval eval_secular_target(const ResolventInput& rin, Complex z, double t) {
    const int n = rin.n();
    const bool compensate = n > 512;
    Complex w{0.0, 0.0}, wc{0.0, 0.0}, wp{0.0, 0.0};
    FEval out;
    for (int j = 0; j < n; ++j) {
        const Complex d = Complex(rin.mus[j], 0.0) - z;
        const double ad = std::abs(d);
        out.min_dist = std::min(out.min_dist, ad);
        const Complex term = rin.weights[j] / d;
        out.scale += std::abs(term);
        if (compensate) {
            const Complex y = term - wc;
            const Complex s = w + y;
            wc = (s - w) - y;
            w = s;
        } else {
            w += term;
        }
        wp += term / d;
    }
    out.scale += 1.0 / t;
    out.f = w - Complex(0.0, 1.0 / t);
    out.fprime = wp;
    return out;
}

struct RootOutcome {
    Complex z;
    int iters = 0;
    bool ok = false;
};

RootOutcome newton_root(const ResolventInput& rin, Complex pred, double t,
                        const TraceOptions& opts) {
    RootOutcome out;
    out.z = pred;
    FEval e = eval_secular_target(rin, out.z, t);
    for (int it = 1; it <= opts.max_newton_iters; ++it) {
        out.iters = it;
        if (!std::isfinite(e.f.real()) || !std::isfinite(e.f.imag())) return out;
        if (e.min_dist < kPoleGuard) return out;
        if (e.fprime == Complex{0.0, 0.0}) return out;
        const Complex step = e.f / e.fprime;
        out.z -= step;
        e = eval_secular_target(rin, out.z, t);
        const double af = std::abs(e.f);
        // Attainable |f| is limited both by the sum's roundoff (eps * scale)
        // and by the ulp quantization of z itself (|f'| * ulp(z)); near a
        // pole the latter dominates. Below that combined floor the root is
        // already ulp-accurate, so accept.
        const double noise_floor =
            8.0 * kEps * (e.scale + std::abs(e.fprime) * (1.0 + std::abs(out.z)));
        const bool residual_ok =
            (af * t <= opts.newton_tol && af <= opts.residual_floor) || af <= noise_floor;
        if (std::abs(step) < opts.step_tol * (1.0 + std::abs(out.z)) && residual_ok) {
            out.ok = true;
            return out;
        }
    }
    return out;
}

}  // namespace

void TimeGrid::validate() const {
    if (points.empty()) throw ConfigError("time grid is empty");
    if (points.front() != 0.0) throw ConfigError("time grid must start at t = 0");
    if (points.size() > 1 && !(dt_max > 0.0))
        throw ConfigError("time grid needs a positive dt_max");
    for (std::size_t s = 1; s < points.size(); ++s) {
        const double step = points[s] - points[s - 1];
        if (!(step > 0.0)) throw ConfigError("time grid must increase strictly");
        if (step > dt_max * (1.0 + 1e-9))
            throw ConfigError("time grid step exceeds the declared dt_max");
    }
}

TimeGrid TimeGrid::uniform(double t_end, double dt) {
    if (!(t_end > 0.0) || !(dt > 0.0)) throw ConfigError("uniform grid needs t_end > 0, dt > 0");
    const int m = std::max(1, static_cast<int>(std::ceil(t_end / dt - 1e-9)));
    TimeGrid grid;
    grid.points.reserve(static_cast<std::size_t>(m) + 1);
    for (int j = 0; j <= m; ++j) grid.points.push_back(t_end * j / m);
    grid.points.back() = t_end;
    grid.dt_max = t_end / m;
    grid.validate();
    return grid;
}

TimeGrid TimeGrid::refined_near_resonance(double t_end, double dt, int factor) {
    if (factor < 1) throw ConfigError("refinement factor must be >= 1");
    const TimeGrid base = uniform(t_end, dt);
    TimeGrid grid;
    grid.dt_max = base.dt_max;
    grid.points.push_back(0.0);
    for (std::size_t s = 1; s < base.points.size(); ++s) {
        const double a = base.points[s - 1];
        const double b = base.points[s];
        if (b > 0.85 && a < 1.15) {
            for (int q = 1; q < factor; ++q) grid.points.push_back(a + (b - a) * q / factor);
        }
        grid.points.push_back(b);
    }
    grid.validate();
    return grid;
}

double TrajectoryBundle::min_pair_distance() const {
    double best = kInf;
    if (!diagnostics.empty()) {
        for (const auto& d : diagnostics)
            if (d.min_distance > 0.0) best = std::min(best, d.min_distance);
        return best;
    }
    for (const auto& z : lambdas) best = std::min(best, min_pair_gap(z));
    return best;
}

void TrajectoryBundle::validate(const ResolventInput& rin, double trace_tol) const {
    constexpr double slack = 1e-10;
    if (lambdas.size() != grid.points.size())
        throw Error("trajectory bundle: state count does not match the grid");
    const int nn = rin.n();
    const double mu_lo = rin.mus[0];
    const double mu_hi = rin.mus[nn - 1];
    const double mu_sum = rin.mus.sum();
    for (std::size_t s = 0; s < lambdas.size(); ++s) {
        const double t = grid.points[s];
        if (lambdas[s].size() != nn)
            throw Error("trajectory bundle: wrong root count at a grid point");
        Complex sum{0.0, 0.0};
        for (int j = 0; j < nn; ++j) {
            const Complex z = lambdas[s][j];
            sum += z;
            const double im = z.imag();
            const bool im_ok = t == 0.0 ? std::abs(im) <= slack : (im > -slack && im < t + slack);
            if (!im_ok || z.real() < mu_lo - slack || z.real() > mu_hi + slack) {
                std::ostringstream msg;
                msg.precision(17);
                msg << "confinement violated at t=" << t << ", j=" << j << ": lambda=("
                    << z.real() << "," << z.imag() << ")";
                throw Error(msg.str());
            }
        }
        if (std::abs(sum - Complex(mu_sum, t)) > trace_tol) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "trace identity violated at t=" << t << ": |sum lambda - (sum mu + it)| = "
                << std::abs(sum - Complex(mu_sum, t));
            throw Error(msg.str());
        }
    }
}

Complex secular(const ResolventInput& rin, double t, Complex z) {
    if (!(t > 0.0)) throw DomainError("secular: t must be positive");
    return 1.0 + Complex(0.0, t) * weighted_resolvent(rin, z);
}

StepResult track_step(const ResolventInput& rin, const Eigen::VectorXcd& lambda_prev,
                      double t_prev, double t_next, const TraceOptions& opts,
                      const Eigen::VectorXcd* lambda_before, double t_before) {
    const int n = rin.n();
    if (lambda_prev.size() != n) throw ConfigError("track_step: state size mismatch");
    if (!(t_next > t_prev) || t_prev < 0.0)
        throw ConfigError("track_step: need 0 <= t_prev < t_next");
    const double dt = t_next - t_prev;

    Eigen::VectorXcd pred(n);
    if (t_prev == 0.0) {
        // Exact initial velocity lambda_j'(0) = i c_j.
        for (int j = 0; j < n; ++j) pred[j] = Complex(rin.mus[j], dt * rin.weights[j]);
    } else if (min_pair_gap(lambda_prev) > 10.0 * opts.collision_tol) {
        // The closed-ODE velocity is the exact derivative; second-order
        // prediction for the price of one O(n^2) evaluation.
        pred = lambda_prev + dt * ode_rhs(lambda_prev, t_prev, rin.weights);
    } else if (lambda_before != nullptr && t_prev > t_before) {
        pred = lambda_prev + (dt / (t_prev - t_before)) * (lambda_prev - *lambda_before);
    } else {
        pred = lambda_prev;
    }

    StepResult res;
    res.lambdas.resize(n);
    std::vector<int> iters(static_cast<std::size_t>(n), 0);
    std::vector<char> ok(static_cast<std::size_t>(n), 0);
    Eigen::VectorXcd* out = &res.lambdas;
    parallel_for(n, [&, out](int j) {
        const RootOutcome r = newton_root(rin, pred[j], t_next, opts);
        (*out)[j] = r.z;
        iters[static_cast<std::size_t>(j)] = r.iters;
        ok[static_cast<std::size_t>(j)] = r.ok ? 1 : 0;
    });
    for (int j = 0; j < n; ++j) res.newton_iters = std::max(res.newton_iters, iters[j]);
    for (int j = 0; j < n; ++j) {
        if (!ok[j]) {
            res.status = StepStatus::Refine;
            return res;
        }
    }

    res.min_distance = min_pair_gap(res.lambdas);
    if (res.min_distance < opts.collision_tol) {
        int j, k;
        closest_pair(res.lambdas, j, k);
        std::ostringstream msg;
        msg.precision(17);
        msg << "roots " << j << " and " << k << " collided at t=" << t_next
            << " (distance " << res.min_distance << "); " << dump_state(res.lambdas);
        throw CollisionError(msg.str(), j, k, t_next);
    }
    if (res.min_distance < 10.0 * opts.collision_tol) {
        res.status = StepStatus::Refine;
        return res;
    }
    res.status = StepStatus::Ok;
    return res;
}

TrajectoryBundle trace_trajectories(const ResolventInput& rin, const TimeGrid& grid,
                                    const TraceOptions& opts) {
    grid.validate();
    const int n = rin.n();
    TrajectoryBundle bundle;
    bundle.grid = grid;
    bundle.method = "continuation";

    Eigen::VectorXcd cur(n);
    for (int j = 0; j < n; ++j) cur[j] = Complex(rin.mus[j], 0.0);
    bundle.lambdas.push_back(cur);
    bundle.diagnostics.push_back({0.0, 0, min_pair_gap(cur)});

    Eigen::VectorXcd before;
    double t_before = 0.0;
    bool have_before = false;

    for (std::size_t s = 1; s < grid.points.size(); ++s) {
        const double tb = grid.points[s];
        double t = grid.points[s - 1];
        double dt = tb - t;
        int clean = 0;
        int worst_iters = 0;
        double worst_dist = kInf;

        while (t < tb) {
            const double t_next = (t + dt >= tb - 1e-12 * dt) ? tb : t + dt;
            const double dt_eff = t_next - t;
            bool refine = false;
            try {
                StepResult res = track_step(rin, cur, t, t_next, opts,
                                            have_before ? &before : nullptr, t_before);
                if (res.status == StepStatus::Ok) {
                    before = cur;
                    t_before = t;
                    have_before = true;
                    cur = std::move(res.lambdas);
                    t = t_next;
                    worst_iters = std::max(worst_iters, res.newton_iters);
                    worst_dist = std::min(worst_dist, res.min_distance);
                    if (++clean >= opts.doubling_after) {
                        dt = std::min(dt * 2.0, grid.dt_max);
                        clean = 0;
                    }
                    continue;
                }
                refine = true;
            } catch (const CollisionError& err) {
                // A collision at a coarse step may still be a near miss the
                // true trajectories thread through; refine before believing it.
                if (dt_eff <= opts.dt_min) {
                    std::ostringstream msg;
                    msg.precision(17);
                    msg << "unresolvable collision: step floor " << opts.dt_min
                        << " reached at t=" << t << "; " << err.what();
                    throw CollisionError(msg.str(), err.j, err.k, err.t);
                }
                refine = true;
            }
            if (refine) {
                if (dt_eff <= opts.dt_min) {
                    int j, k;
                    closest_pair(cur, j, k);
                    std::ostringstream msg;
                    msg.precision(17);
                    msg << "continuation stalled: step floor " << opts.dt_min
                        << " reached at t=" << t << " (closest pair " << j << "," << k
                        << "); " << dump_state(cur);
                    throw CollisionError(msg.str(), j, k, t);
                }
                dt = dt_eff / 2.0;
                clean = 0;
            }
        }

        bundle.lambdas.push_back(cur);
        bundle.diagnostics.push_back({tb, worst_iters, worst_dist});
    }

    bundle.validate(rin, 1e-9);
    return bundle;
}

Eigen::VectorXcd ode_rhs(const Eigen::VectorXcd& lambdas, double t,
                         const Eigen::VectorXd& weights) {
    const int n = static_cast<int>(lambdas.size());
    if (t < 0.0) throw DomainError("ode_rhs: t must be nonnegative");
    if (t == 0.0) {
        if (weights.size() != n) throw ConfigError("ode_rhs: weights required at t = 0");
        Eigen::VectorXcd out(n);
        for (int j = 0; j < n; ++j) out[j] = Complex(0.0, weights[j]);
        return out;
    }
    Eigen::VectorXcd out(n);
    for (int j = 0; j < n; ++j) {
        Complex prod{1.0, 0.0};
        for (int k = 0; k < n; ++k) {
            if (k == j) continue;
            const Complex diff = lambdas[j] - lambdas[k];
            if (std::abs(diff) < kOdeGapTol) {
                std::ostringstream msg;
                msg.precision(17);
                msg << "ode_rhs: eigenvalues " << j << " and " << k << " within " << kOdeGapTol
                    << " at t=" << t;
                throw SingularityError(msg.str(), t);
            }
            prod *= 1.0 + Complex(0.0, 2.0 * lambdas[k].imag()) / diff;
        }
        out[j] = Complex(0.0, lambdas[j].imag() / t) * prod;
    }
    return out;
}

TrajectoryBundle integrate_ode(const ResolventInput& rin, const TimeGrid& grid, double dt) {
    grid.validate();
    if (!(dt > 0.0)) throw ConfigError("integrate_ode: dt must be positive");
    const int n = rin.n();
    TrajectoryBundle bundle;
    bundle.grid = grid;
    bundle.method = "ode";

    Eigen::VectorXcd cur(n);
    for (int j = 0; j < n; ++j) cur[j] = Complex(rin.mus[j], 0.0);
    bundle.lambdas.push_back(cur);
    bundle.diagnostics.push_back({0.0, 0, min_pair_gap(cur)});

    for (std::size_t s = 1; s < grid.points.size(); ++s) {
        const double ta = grid.points[s - 1];
        const double tb = grid.points[s];
        const int m = std::max(1, static_cast<int>(std::ceil((tb - ta) / dt - 1e-9)));
        const double h = (tb - ta) / m;
        double worst_dist = kInf;
        for (int step = 0; step < m; ++step) {
            const double t0 = ta + h * step;
            const Eigen::VectorXcd k1 = ode_rhs(cur, t0, rin.weights);
            const Eigen::VectorXcd k2 = ode_rhs(cur + (h / 2.0) * k1, t0 + h / 2.0, rin.weights);
            const Eigen::VectorXcd k3 = ode_rhs(cur + (h / 2.0) * k2, t0 + h / 2.0, rin.weights);
            const Eigen::VectorXcd k4 = ode_rhs(cur + h * k3, t0 + h, rin.weights);
            cur += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            worst_dist = std::min(worst_dist, min_pair_gap(cur));
        }
        bundle.lambdas.push_back(cur);
        bundle.diagnostics.push_back({tb, 0, worst_dist});
    }

    bundle.validate(rin, 1e-7);
    return bundle;
}

Eigen::VectorXcd oracle_eigen(const Eigen::VectorXd& mus, const Eigen::VectorXd& weights,
                              double t) {
    const int n = static_cast<int>(mus.size());
    if (n < 1 || n > 64) throw ConfigError("oracle_eigen: desk-scale oracle handles 1 <= n <= 64");
    if (weights.size() != n) throw ConfigError("oracle_eigen: weights size mismatch");
    if (t < 0.0) throw DomainError("oracle_eigen: t must be nonnegative");

    Eigen::VectorXcd roots(n);
    if (t == 0.0) {
        for (int j = 0; j < n; ++j) roots[j] = Complex(mus[j], 0.0);
        return roots;
    }

    // P in product/sum form; never expanded into coefficients.
    const auto P = [&](Complex z) {
        Complex prod{1.0, 0.0};
        for (int j = 0; j < n; ++j) prod *= (Complex(mus[j], 0.0) - z);
        Complex sum{0.0, 0.0};
        for (int j = 0; j < n; ++j) {
            Complex pj{1.0, 0.0};
            for (int k = 0; k < n; ++k)
                if (k != j) pj *= (Complex(mus[k], 0.0) - z);
            sum += weights[j] * pj;
        }
        return prod + Complex(0.0, t) * sum;
    };

    // Initial estimates on a circle around the root centroid (trace
    // identity), wide enough to enclose the containment box
    // [mu_1, mu_n] x [0, t]; the angular offset breaks axis symmetry.
    const Complex center = Complex(mus.sum(), t) / static_cast<double>(n);
    double radius = 1.0;
    for (const double e : {mus[0], mus[n - 1]})
        for (const double y : {0.0, t})
            radius = std::max(radius, std::abs(Complex(e, y) - center) + 1.0);
    Eigen::VectorXcd circle(n);
    for (int j = 0; j < n; ++j) {
        const double theta = 2.0 * M_PI * (j + 0.37) / n;
        circle[j] = center + radius * Complex(std::cos(theta), std::sin(theta));
    }
    double circle_max = 0.0;
    for (int j = 0; j < n; ++j) circle_max = std::max(circle_max, std::abs(P(circle[j])));

    roots = circle;
    const double lead = (n % 2 == 0) ? 1.0 : -1.0;  // coefficient of z^n
    bool settled = false;
    for (int sweep = 0; sweep < 1000 && !settled; ++sweep) {
        double max_step = 0.0;
        double max_abs = 0.0;
        for (int i = 0; i < n; ++i) {
            Complex denom{lead, 0.0};
            for (int k = 0; k < n; ++k)
                if (k != i) denom *= (roots[i] - roots[k]);
            if (denom == Complex{0.0, 0.0}) {
                roots[i] += 1e-12 * (1.0 + std::abs(roots[i]));
                max_step = kInf;
                continue;
            }
            const Complex delta = P(roots[i]) / denom;
            roots[i] -= delta;
            if (!std::isfinite(roots[i].real()) || !std::isfinite(roots[i].imag()))
                throw ConvergenceError("oracle_eigen: iteration diverged", i);
            max_step = std::max(max_step, std::abs(delta));
            max_abs = std::max(max_abs, std::abs(roots[i]));
        }
        settled = max_step <= 1e-13 * (1.0 + max_abs);
    }
    if (!settled) throw ConvergenceError("oracle_eigen: no convergence after 1000 sweeps");

    for (int i = 0; i < n; ++i) {
        if (std::abs(P(roots[i])) > 1e-10 * circle_max)
            throw ConvergenceError("oracle_eigen: residual above the certified bound", i);
    }
    return roots;
}

LimitPoints limit_points(const HermitianMatrix& H, const UnitVector& v) {
    const int n = H.n();
    if (v.entries.size() != n) throw ConfigError("limit_points: dimension mismatch");
    if (n < 2) throw ConfigError("limit_points: need n >= 2");
    // Householder completion of v to a unitary; columns 2..n span v-perp.
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(v.entries);
    const Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd basis = q.rightCols(n - 1);
    const Eigen::MatrixXcd compressed = basis.adjoint() * H.entries * basis;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(compressed);
    if (solver.info() != Eigen::Success)
        throw ConvergenceError("limit_points: compressed eigensolve failed");
    return {solver.eigenvalues()};
}

std::vector<int> min_cost_matching(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    const int n = static_cast<int>(a.size());
    if (b.size() != n || n == 0) throw ConfigError("min_cost_matching: size mismatch");
    // Jonker-Volgenant shortest augmenting paths with potentials; O(n^3).
    const double inf = kInf;
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = 0;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = std::abs(a[i0 - 1] - b[j - 1]) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> perm(n, -1);
    for (int j = 1; j <= n; ++j) perm[p[j] - 1] = j - 1;
    return perm;
}

double matched_max_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    const std::vector<int> perm = min_cost_matching(a, b);
    double worst = 0.0;
    for (int i = 0; i < static_cast<int>(a.size()); ++i)
        worst = std::max(worst, std::abs(a[i] - b[perm[i]]));
    return worst;
}

}  // namespace rankone
