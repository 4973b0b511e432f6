#include "rankone/resolvent.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

namespace rankone {

namespace {

// Shared core of W and W'. Direct summation in index order; for n > 512 a
// compensated (Kahan) accumulator keeps the ill-conditioned near-pole terms
// from swamping the rest. Also tracks the distance to the nearest pole so
// the guard can fire after a single pass.
Complex sum_terms(const ResolventInput& rin, Complex z, bool squared) {
    const int n = rin.n();
    double min_dist = std::numeric_limits<double>::infinity();
    Complex sum{0.0, 0.0};
    Complex comp{0.0, 0.0};
    const bool compensate = n > 512;
    for (int j = 0; j < n; ++j) {
        const Complex d = Complex(rin.mus[j], 0.0) - z;
        min_dist = std::min(min_dist, std::abs(d));
        const Complex term = squared ? rin.weights[j] / (d * d) : rin.weights[j] / d;
        if (compensate) {
            const Complex y = term - comp;
            const Complex t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        } else {
            sum += term;
        }
    }
    if (min_dist < kPoleGuard) {
        throw PoleProximityError(
            "weighted resolvent evaluated " + std::to_string(min_dist) + " from a pole",
            min_dist);
    }
    return sum;
}

}  // namespace

Complex weighted_resolvent(const ResolventInput& rin, Complex z) {
    return sum_terms(rin, z, false);
}

Complex weighted_resolvent_deriv(const ResolventInput& rin, Complex z) {
    return sum_terms(rin, z, true);
}

Complex m_frak(Complex z) {
    if (z.imag() == 0.0 && std::abs(z.real()) >= 2.0) {
        throw DomainError("m_frak: z lies on the excluded rays (-inf,-2] and [2,inf)");
    }
    // Of the two square roots of z^2-4, take the one in the upper half
    // plane. Inside the domain Im(z^2-4) = 0 only with Re < 0, where the
    // principal root is already +i|.|^{1/2}, so the flip below suffices.
    Complex w = std::sqrt(z * z - 4.0);
    if (w.imag() < 0.0) w = -w;
    return 0.5 * (-z + w);
}

double t_star(double t) {
    if (!(t > 0.0)) throw DomainError("t_star: t must be positive, got " + std::to_string(t));
    return t - 1.0 / t;
}

LocalLawReport local_law_error(const ResolventInput& rin, std::span<const Complex> grid,
                               std::int64_t n, double zeta) {
    const double eta_min = std::pow(static_cast<double>(n), -1.0 + zeta);
    LocalLawReport report;
    report.grid.assign(grid.begin(), grid.end());
    report.raw_error.reserve(grid.size());
    report.normalized_error.reserve(grid.size());
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
        const double e = grid[idx].real();
        const double eta = grid[idx].imag();
        if (!(std::abs(e) < 3.0 && eta >= eta_min && eta < kEtaMax)) {
            throw DomainError("local_law_error: grid point " + std::to_string(idx) +
                              " outside the strip S_zeta");
        }
        const double raw = std::abs(weighted_resolvent(rin, grid[idx]) - m_frak(grid[idx]));
        const double normalized =
            raw * std::sqrt(static_cast<double>(n) * eta) * std::pow(1.0 + eta * eta, 0.75);
        report.raw_error.push_back(raw);
        report.normalized_error.push_back(normalized);
        if (normalized > report.sup_normalized) report.sup_normalized = normalized;
    }
    return report;
}

}  // namespace rankone
