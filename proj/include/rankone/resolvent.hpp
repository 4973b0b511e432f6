#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "rankone/rmt.hpp"
#include "rankone/types.hpp"

namespace rankone {

// View of a spectrum exposing only what the scalar functions need:
// eigenvalues (ascending) and nonnegative weights summing to one.
struct ResolventInput {
    Eigen::VectorXd mus;
    Eigen::VectorXd weights;

    int n() const { return static_cast<int>(mus.size()); }
    static ResolventInput from(const SpectralData& s) { return {s.mus, s.weights}; }
};

// Below this distance to a pole the dominant term of W has no relative
// accuracy left; evaluation is refused.
inline constexpr double kPoleGuard = 1e-13;

// W(z) = sum_j c_j / (mu_j - z), the weighted resolvent <v|(H-z)^{-1}|v>.
// Direct summation in index order; compensated accumulation for n > 512.
Complex weighted_resolvent(const ResolventInput& rin, Complex z);

// W'(z) = sum_j c_j / (mu_j - z)^2.
Complex weighted_resolvent_deriv(const ResolventInput& rin, Complex z);

// Holomorphic continuation of the semicircle Stieltjes transform through
// (-2, 2): m(z) = (-z + sqrt(z^2-4))/2 with Im sqrt(z^2-4) > 0. Defined on
// C minus the real rays (-inf,-2] and [2,inf); solves m^2 + z m + 1 = 0.
Complex m_frak(Complex z);

// Resonance height t* = t - 1/t; satisfies m(i t*) = i/t.
double t_star(double t);

// Per-point local-law error diagnostic over a grid in the strip S_zeta.
struct LocalLawReport {
    std::vector<Complex> grid;
    std::vector<double> raw_error;         // |W(z) - m(z)|
    std::vector<double> normalized_error;  // raw * sqrt(N eta) * (1+eta^2)^{3/4}
    double sup_normalized = 0.0;
};

// Finite-N analogue of the spectral strip cap (the asymptotic statement
// allows eta up to N^100).
inline constexpr double kEtaMax = 1e4;

// Evaluates |W - m| on the grid. Every point must lie in
// { |Re z| < 3, N^{-1+zeta} <= eta < kEtaMax }; offending points are
// rejected with their index. Report-only: no pass/fail at this layer.
LocalLawReport local_law_error(const ResolventInput& rin, std::span<const Complex> grid,
                               std::int64_t n, double zeta);

}  // namespace rankone
