#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rankone/trajectory.hpp"
#include "rankone/types.hpp"

namespace rankone {

// Parameters of the spectral domains. epsilon and zeta are the theorem
// exponents, t_cap the fixed horizon T >= 2, n the dimension entering the
// N-dependent thresholds (may be astronomically larger than any sampled
// matrix for arithmetic-only checks). t_max is the finite stand-in for the
// N^99 horizon of the large-t statement, as eta_max is for N^100.
struct DomainParams {
    double epsilon = 0.3;
    double zeta = 0.2;
    double t_cap = 2.0;
    std::int64_t n = 0;
    double t_max = 1e3;

    void validate() const;
};

// Membership tests for the spectral domains. E = Re z, eta = Im z.
//   S_zeta:    |E| < 3,  N^{-1+zeta} <= eta < eta_max
//   E_{t,eps}: |E| < 3,  0 <= eta < t_cap,  E^2 + (eta - t*)^2 < N^eps/(N eta)
//   H_eps:     |E| < 3,  0 <= eta < t_cap,  eta E^2 < N^{-1+eps}
//   R_zeta:    |E| < 3,  0 <= eta < N^{-1+zeta}
// All bound inequalities are strict; eta = 0 in E_{t,eps} and H_eps makes
// the bound vacuous (membership then rests on |E| < 3 alone).
bool in_S(Complex z, const DomainParams& params);
bool in_elliptic(Complex z, double t, const DomainParams& params);
bool in_hyperbolic(Complex z, const DomainParams& params);
bool in_R(Complex z, const DomainParams& params);

// Outlier classification at a fixed time t > 1: the disk D(i t*, radius)
// with radius N^{eps/4}/sqrt(N t*), and the bulk ceiling N^eps/(N t*^2).
// separated means exactly one eigenvalue sits in the disk and every other
// one stays below the ceiling. Pure arithmetic, no tolerances.
struct OutlierReport {
    double t = 0.0;
    double t_star = 0.0;
    int outlier_index = -1;  // -1 when no unique in-disk eigenvalue
    Complex outlier_value{0.0, 0.0};
    double disk_radius = 0.0;
    bool in_disk = false;  // exactly one eigenvalue in the disk
    double bulk_bound = 0.0;
    double bulk_max_im = 0.0;
    bool separated = false;
};

OutlierReport classify_outlier(const Eigen::VectorXcd& lambdas, double t,
                               const DomainParams& params);

// Confinement report for a traced bundle: every eigenvalue at every grid
// time 0 < t < t_cap must lie in E_{t,eps} union R_zeta, and in H_eps.
// Margins are signed bound excesses (ratio to the bound minus 1, so
// negative means inside); +inf marks a point failing a box condition.
// Report-only: violations are counted, never thrown.
struct ConfinementReport {
    std::int64_t checked = 0;
    std::int64_t skipped_times = 0;  // grid times outside (0, t_cap)
    std::int64_t union_violations = 0;
    std::int64_t hyperbolic_violations = 0;
    double worst_union_margin = 0.0;
    double worst_hyperbolic_margin = 0.0;
};

ConfinementReport check_confinement(const TrajectoryBundle& bundle, const DomainParams& params);

// Small-time bounds: Im lambda < N^{-1/3+eps} while t < 1 + N^{-1/3-eps}
// (regime a), and Im lambda <= max(N^eps/(N t*^2), N^zeta/N) while
// t < 1 - N^{-1/3+eps} (regime b). Margins as in ConfinementReport.
struct SmallTReport {
    std::int64_t checked_a = 0;
    std::int64_t violations_a = 0;
    double worst_margin_a = 0.0;
    std::int64_t checked_b = 0;
    std::int64_t violations_b = 0;
    double worst_margin_b = 0.0;
};

SmallTReport small_t_check(const TrajectoryBundle& bundle, const DomainParams& params);

// Large-time bounds for grid times in [t_cap, t_max]: the max-Im trajectory
// must sit within N^{-1/2+eps} of i t*, every other one inside R_zeta.
struct LargeTReport {
    std::int64_t checked_times = 0;
    std::int64_t outlier_violations = 0;
    std::int64_t bulk_violations = 0;
    double outlier_tolerance = 0.0;  // N^{-1/2+eps}
    double worst_outlier_distance = 0.0;
    double worst_bulk_margin = 0.0;
};

LargeTReport large_t_check(const TrajectoryBundle& bundle, const DomainParams& params);

// Outlier label of a traced bundle: argmax Im at the final time. stable is
// false when the argmax changes anywhere over the last decade of t (the
// label is only well defined once one trajectory has clearly escaped).
struct OutlierLabel {
    int j_out = -1;
    bool stable = true;
};

OutlierLabel outlier_label(const TrajectoryBundle& bundle);

// Monte Carlo separation frequency as a function of t. For each t, `trials`
// independent (H, v) systems are drawn with seeds base+0 .. base+trials-1,
// traced from 0 to t, and classified; t <= 1 short-circuits to frequency 0
// (classification needs t* > 0). Per-trial failures are recorded, not
// fatal, and count as not separated.
struct EmergenceCurve {
    std::vector<double> t_values;
    std::vector<double> frequency;
    int trials = 0;
    int n = 0;
    std::vector<std::string> failures;
};

EmergenceCurve emergence_scan(const RunConfig& config, const std::vector<double>& t_values,
                              int trials, const DomainParams& params);

// Where do outliers come from: for each trial, trace to t_final and record
// j_out, which is also the ascending rank of the origin eigenvalue mu_{j_out}.
// Exploratory by design; nothing here asserts the central-rank bias.
struct OriginHistogram {
    int n = 0;
    int trials = 0;
    double t_final = 0.0;
    std::vector<std::int64_t> counts;       // indexed by rank 0..n-1
    std::vector<int> origin_ranks;          // per successful trial, in trial order
    std::vector<double> center_distances;   // |rank - (n-1)/2| per successful trial
    std::vector<std::string> failures;
    std::vector<char> label_stable;         // outlier_label stability per trial
};

OriginHistogram origin_histogram(const RunConfig& config, int trials, double t_final);

}  // namespace rankone
