#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "rankone/resolvent.hpp"
#include "rankone/rmt.hpp"
#include "rankone/types.hpp"

namespace rankone {

// Time grid for trajectory runs: strictly increasing, starts at 0. dt_max is
// the declared step bound; adaptive stepping never exceeds it.
struct TimeGrid {
    std::vector<double> points;
    double dt_max = 0.0;

    int size() const { return static_cast<int>(points.size()); }
    double t_end() const { return points.empty() ? 0.0 : points.back(); }

    // Throws ConfigError unless points start at 0, increase strictly, and
    // every step stays within dt_max.
    void validate() const;

    static TimeGrid uniform(double t_end, double dt);
    // Uniform grid with intervals touching [0.85, 1.15] subdivided `factor`
    // times: trajectories turn fastest around the critical time t = 1.
    static TimeGrid refined_near_resonance(double t_end, double dt, int factor = 5);
};

struct TraceOptions {
    double newton_tol = 1e-12;     // convergence: |f| * t <= newton_tol
    double step_tol = 1e-13;       // ... and |step| < step_tol * (1 + |z|)
    double residual_floor = 5e-11; // ... and |f| <= residual_floor outright
    int max_newton_iters = 50;
    double collision_tol = 1e-10;  // hard minimum pairwise root distance
    double dt_min = 1e-9;          // refinement floor before giving up
    int doubling_after = 5;        // clean steps before the step doubles
};

// Per-grid-point diagnostics accumulated over the sub-steps of the interval
// ending at t.
struct StepDiagnostics {
    double t = 0.0;
    int newton_iters = 0;     // worst per-root iteration count
    double min_distance = 0;  // closest pairwise approach seen
};

// All n trajectories sampled on a grid, one method per bundle.
struct TrajectoryBundle {
    TimeGrid grid;
    std::vector<Eigen::VectorXcd> lambdas;  // lambdas[s][j] at grid.points[s]
    std::string method;                     // continuation | ode | oracle
    std::vector<StepDiagnostics> diagnostics;

    int n() const { return lambdas.empty() ? 0 : static_cast<int>(lambdas.front().size()); }
    double min_pair_distance() const;

    // Confinement (0 < Im < t, mu_1 <= Re <= mu_n, slack 1e-10) and the
    // trace identity sum lambda = sum mu + it within trace_tol.
    void validate(const ResolventInput& rin, double trace_tol) const;
};

struct LimitPoints {
    Eigen::VectorXd values;  // n-1 reals, ascending
};

// 1 + it W(z); vanishes exactly on the spectrum of H + itvv*.
Complex secular(const ResolventInput& rin, double t, Complex z);

enum class StepStatus { Ok, Refine };

struct StepResult {
    StepStatus status = StepStatus::Refine;
    Eigen::VectorXcd lambdas;
    int newton_iters = 0;        // worst over roots
    double min_distance = 0.0;   // pairwise, after correction
};

// One continuation step t_prev -> t_next: per-root Newton on
// f(z) = W(z) - i/t_next, seeded by a predictor (exact velocity i c_j for the
// first step, the closed-ODE velocity afterwards, linear extrapolation
// through (t_before, lambda_before) when roots are nearly paired). Returns
// Refine when any root fails to converge within max_newton_iters or the
// corrected roots pair up within 10x collision_tol; throws CollisionError
// when two roots land within collision_tol.
StepResult track_step(const ResolventInput& rin, const Eigen::VectorXcd& lambda_prev,
                      double t_prev, double t_next, const TraceOptions& opts,
                      const Eigen::VectorXcd* lambda_before = nullptr, double t_before = 0.0);

// Newton continuation over the whole grid with adaptive sub-stepping:
// halve on refinement, double after `doubling_after` clean steps (capped at
// grid.dt_max), abort with CollisionError once the step would drop below
// dt_min. Validates the bundle invariants before returning.
TrajectoryBundle trace_trajectories(const ResolventInput& rin, const TimeGrid& grid,
                                    const TraceOptions& opts = {});

// Right-hand side of the closed trajectory ODE
//   lambda_j' = (i Im lambda_j / t) prod_{k != j} (1 + 2i Im lambda_k / (lambda_j - lambda_k))
// for t > 0; at t = 0 the initial velocities i c_j (weights required).
// Pairwise gaps below 1e-12 raise SingularityError.
Eigen::VectorXcd ode_rhs(const Eigen::VectorXcd& lambdas, double t,
                         const Eigen::VectorXd& weights);

// Classical fixed-step RK4 for the closed ODE, sub-stepping each grid
// interval at roughly dt. Method tag "ode".
TrajectoryBundle integrate_ode(const ResolventInput& rin, const TimeGrid& grid,
                               double dt = 5e-4);

// Brute-force spectrum of H + itvv* as the roots of
//   P(z) = prod_j (mu_j - z) + it sum_j c_j prod_{k != j} (mu_k - z),
// by Durand-Kerner iteration with P evaluated in product/sum form. Unordered.
// Desk-scale oracle: n <= 64.
Eigen::VectorXcd oracle_eigen(const Eigen::VectorXd& mus, const Eigen::VectorXd& weights,
                              double t);

// Eigenvalues of H compressed to the orthogonal complement of v; the
// trajectories' t -> infinity destinations (all but the outlier).
LimitPoints limit_points(const HermitianMatrix& H, const UnitVector& v);

// Minimum-cost perfect matching (Jonker-Volgenant) under |a_i - b_j|;
// returns perm with b[perm[i]] matched to a[i]. For comparing against the
// unordered oracle output.
std::vector<int> min_cost_matching(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

// Largest pairwise distance after optimal matching.
double matched_max_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

}  // namespace rankone
