#include <doctest.h>

#include <rankone/resolvent.hpp>
#include <rankone/rng.hpp>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

using namespace rankone;

namespace {

ResolventInput two_point_input() {
    ResolventInput rin;
    rin.mus = Eigen::VectorXd(2);
    rin.mus << -1.0, 1.0;
    rin.weights = Eigen::VectorXd(2);
    rin.weights << 0.5, 0.5;
    return rin;
}

ResolventInput random_input(int n, std::uint64_t seed) {
    SplitMix64 gen(seed);
    ResolventInput rin;
    rin.mus = Eigen::VectorXd(n);
    rin.weights = Eigen::VectorXd(n);
    double pos = -2.0;
    double wsum = 0.0;
    for (int j = 0; j < n; ++j) {
        pos += 0.05 + gen.uniform();
        rin.mus[j] = pos;
        rin.weights[j] = 0.1 + gen.uniform();
        wsum += rin.weights[j];
    }
    rin.weights /= wsum;
    return rin;
}

}  // namespace

TEST_CASE("weighted_resolvent single term equals 1/(mu - z)") {
    ResolventInput rin;
    rin.mus = Eigen::VectorXd::Constant(1, 0.7);
    rin.weights = Eigen::VectorXd::Constant(1, 1.0);
    Complex z(0.2, 0.3);
    CHECK(std::abs(weighted_resolvent(rin, z) - 1.0 / (0.7 - z)) <= 1e-15);
}

TEST_CASE("weighted_resolvent two-point value at z = i") {
    // W(z) = -z/(z^2-1) for mus (-1,1) with equal weights; W(i) = i/2.
    Complex w = weighted_resolvent(two_point_input(), Complex(0.0, 1.0));
    CHECK(std::abs(w - Complex(0.0, 0.5)) <= 1e-15);
}

TEST_CASE("weighted_resolvent is anti-symmetric under conjugation") {
    ResolventInput rin = random_input(10, 3);
    SplitMix64 gen(4);
    for (int k = 0; k < 25; ++k) {
        Complex z(4.0 * gen.uniform() - 2.0, 2.0 * gen.uniform() + 0.01);
        Complex w = weighted_resolvent(rin, z);
        Complex wc = weighted_resolvent(rin, std::conj(z));
        CHECK(std::abs(wc - std::conj(w)) <= 1e-15 * std::abs(w));
    }
}

TEST_CASE("weighted_resolvent is Herglotz for positive weights") {
    ResolventInput rin = random_input(12, 5);
    SplitMix64 gen(6);
    for (int k = 0; k < 50; ++k) {
        Complex z(6.0 * gen.uniform() - 3.0, 3.0 * gen.uniform() + 1e-4);
        CHECK(weighted_resolvent(rin, z).imag() > 0.0);
    }
}

TEST_CASE("weighted_resolvent_deriv vanishes at the two-point critical point") {
    Complex d = weighted_resolvent_deriv(two_point_input(), Complex(0.0, 1.0));
    CHECK(std::abs(d) <= 1e-15);
}

TEST_CASE("weighted_resolvent_deriv single term at mu + i equals -1") {
    ResolventInput rin;
    rin.mus = Eigen::VectorXd::Constant(1, 0.4);
    rin.weights = Eigen::VectorXd::Constant(1, 1.0);
    Complex d = weighted_resolvent_deriv(rin, Complex(0.4, 1.0));
    CHECK(std::abs(d - Complex(-1.0, 0.0)) <= 1e-15);
}

TEST_CASE("weighted_resolvent_deriv matches central differences") {
    ResolventInput rin = random_input(8, 7);
    SplitMix64 gen(8);
    const double h = 1e-6;
    for (int k = 0; k < 20; ++k) {
        Complex z(4.0 * gen.uniform() - 2.0, 0.5 + gen.uniform());
        Complex fd = (weighted_resolvent(rin, z + h) - weighted_resolvent(rin, z - h)) / (2.0 * h);
        CHECK(std::abs(weighted_resolvent_deriv(rin, z) - fd) <= 1e-6);
    }
}

TEST_CASE("compensated summation agrees with extended precision for n > 512") {
    const int n = 600;
    ResolventInput rin = random_input(n, 9);
    Complex z(rin.mus[n / 2] + 2e-7, 3e-7);
    Complex w = weighted_resolvent(rin, z);
    std::complex<long double> ref(0.0L, 0.0L);
    for (int j = 0; j < n; ++j) {
        std::complex<long double> d(static_cast<long double>(rin.mus[j]) - z.real(), -z.imag());
        ref += static_cast<long double>(rin.weights[j]) / d;
    }
    Complex refd(static_cast<double>(ref.real()), static_cast<double>(ref.imag()));
    CHECK(std::abs(w - refd) <= 1e-13 * std::abs(refd));
}

TEST_CASE("pole guard rejects evaluation within 1e-13 of a pole") {
    ResolventInput rin = two_point_input();
    CHECK_THROWS_AS(weighted_resolvent(rin, Complex(1.0, 0.0)), PoleProximityError);
    CHECK_THROWS_AS(weighted_resolvent(rin, Complex(1.0 + 5e-14, 0.0)), PoleProximityError);
    CHECK_THROWS_AS(weighted_resolvent_deriv(rin, Complex(-1.0, 5e-14)), PoleProximityError);
    // Just outside the guard evaluation proceeds.
    CHECK_NOTHROW(weighted_resolvent(rin, Complex(1.0 + 2e-13, 0.0)));
    try {
        weighted_resolvent(rin, Complex(1.0, 1e-14));
    } catch (const PoleProximityError& e) {
        CHECK(e.distance == doctest::Approx(1e-14).epsilon(1e-6));
    }
}

TEST_CASE("pole blowup dominates the off-pole background") {
    ResolventInput rin = random_input(15, 11);
    for (int j : {0, 7, 14}) {
        double gap = 1e300;
        for (int k = 0; k < 15; ++k)
            if (k != j) gap = std::min(gap, std::abs(rin.mus[k] - rin.mus[j]));
        double delta = 1e-8;
        double lower = rin.weights[j] / delta - (1.0 - rin.weights[j]) / gap;
        CHECK(std::abs(weighted_resolvent(rin, Complex(rin.mus[j], delta))) >= lower);
    }
}

TEST_CASE("m_frak reproduces hand values on the imaginary axis") {
    CHECK(std::abs(m_frak(Complex(0.0, 1.5)) - Complex(0.0, 0.5)) <= 1e-15);
    CHECK(std::abs(m_frak(Complex(0.0, 2.0)) - Complex(0.0, std::sqrt(2.0) - 1.0)) <= 1e-15);
    CHECK(std::abs(m_frak(Complex(0.0, 1.0)) - Complex(0.0, (std::sqrt(5.0) - 1.0) / 2.0)) <=
          1e-15);
}

TEST_CASE("m_frak satisfies its defining quadratic on 1000 random domain points") {
    SplitMix64 gen(12);
    int tested = 0;
    while (tested < 1000) {
        double e = 8.0 * gen.uniform() - 4.0;
        double eta = 6.0 * gen.uniform() - 3.0;
        if (eta == 0.0 && std::abs(e) >= 2.0) continue;
        Complex z(e, eta);
        Complex m = m_frak(z);
        CHECK(std::abs(m * m + z * m + 1.0) <= 1e-13);
        ++tested;
    }
}

TEST_CASE("m_frak maps into the upper half plane on its whole domain") {
    SplitMix64 gen(13);
    for (int k = 0; k < 400; ++k) {
        Complex z(8.0 * gen.uniform() - 4.0, 6.0 * gen.uniform() - 3.0);
        if (z.imag() == 0.0 && std::abs(z.real()) >= 2.0) continue;
        CHECK(m_frak(z).imag() > 0.0);
    }
    // Through the spectral interval the continuation stays in the upper
    // half plane even for Im z < 0 (second sheet).
    CHECK(m_frak(Complex(0.5, -0.3)).imag() > 0.0);
}

TEST_CASE("m_frak inversion identity z + (1+m^2)/m = 0") {
    SplitMix64 gen(14);
    for (int k = 0; k < 300; ++k) {
        Complex z(5.0 * gen.uniform() - 2.5, 4.0 * gen.uniform() - 2.0);
        if (z.imag() == 0.0 && std::abs(z.real()) >= 2.0) continue;
        Complex m = m_frak(z);
        CHECK(std::abs(z + (1.0 + m * m) / m) <= 1e-12);
    }
}

TEST_CASE("m_frak rejects the excluded real rays") {
    CHECK_THROWS_AS(m_frak(Complex(2.0, 0.0)), DomainError);
    CHECK_THROWS_AS(m_frak(Complex(-2.0, 0.0)), DomainError);
    CHECK_THROWS_AS(m_frak(Complex(3.0, 0.0)), DomainError);
    CHECK_THROWS_AS(m_frak(Complex(-17.5, 0.0)), DomainError);
    CHECK_NOTHROW(m_frak(Complex(1.999, 0.0)));
    CHECK_NOTHROW(m_frak(Complex(3.0, 1e-6)));
}

TEST_CASE("m_frak continues analytically through the spectral interval") {
    // On (-2,2) the one-sided limits agree; the mismatch between eta and
    // -eta is first order, 2*eta*|m'(E)| with |m'(E)| = 1/sqrt(4-E^2).
    for (double e = -1.95; e <= 1.95; e += 0.15) {
        double mprime = 1.0 / std::sqrt(4.0 - e * e);

        double delta = 1e-8;
        Complex above = m_frak(Complex(e, delta));
        Complex below = m_frak(Complex(e, -delta));
        CHECK(std::abs(above - below) <= 2.0 * delta * mprime * 1.5 + 1e-14);

        delta = 1e-11;
        above = m_frak(Complex(e, delta));
        below = m_frak(Complex(e, -delta));
        CHECK(std::abs(above - below) <= 1e-10);
    }
}

TEST_CASE("t_star values and domain") {
    CHECK(t_star(1.0) == 0.0);
    CHECK(t_star(2.0) == 1.5);
    CHECK(t_star(0.5) == -1.5);
    CHECK_THROWS_AS(t_star(0.0), DomainError);
    CHECK_THROWS_AS(t_star(-1.0), DomainError);
}

TEST_CASE("t_star solves m_frak(i t*) = i/t") {
    for (double t : {1.01, 1.5, 2.0, 10.0}) {
        Complex lhs = m_frak(Complex(0.0, t_star(t)));
        CHECK(std::abs(lhs - Complex(0.0, 1.0 / t)) <= 1e-13);
    }
    // Below t = 1 the point i t* drops under the axis but stays inside the
    // cut plane; the identity persists.
    Complex lhs = m_frak(Complex(0.0, t_star(0.5)));
    CHECK(std::abs(lhs - Complex(0.0, 2.0)) <= 1e-13);
}

TEST_CASE("local_law_error two-point fixture at z = i") {
    ResolventInput rin = two_point_input();
    std::vector<Complex> grid{Complex(0.0, 1.0)};
    LocalLawReport report = local_law_error(rin, grid, 2, 0.2);
    REQUIRE(report.raw_error.size() == 1);
    CHECK(report.raw_error[0] == doctest::Approx(0.1180339887498949).epsilon(1e-12));
    CHECK(report.normalized_error[0] == doctest::Approx(0.2807337184670523).epsilon(1e-12));
    CHECK(report.sup_normalized == report.normalized_error[0]);
    CHECK(report.grid == grid);
}

TEST_CASE("local_law_error far from the spectrum is O(1/eta)") {
    ResolventInput rin;
    rin.mus = Eigen::VectorXd::Constant(1, 0.3);
    rin.weights = Eigen::VectorXd::Constant(1, 1.0);
    std::vector<Complex> grid{Complex(0.0, 100.0)};
    LocalLawReport report = local_law_error(rin, grid, 2, 0.2);
    CHECK(report.raw_error[0] <= 2.0 / 100.0);
}

TEST_CASE("local_law_error sup is the max over the grid") {
    ResolventInput rin = random_input(20, 15);
    std::vector<Complex> grid;
    for (int k = 0; k < 40; ++k) grid.push_back(Complex(-2.0 + 0.1 * k, 0.05 + 0.02 * k));
    LocalLawReport report = local_law_error(rin, grid, 1000, 0.2);
    double best = 0.0;
    for (double v : report.normalized_error) best = std::max(best, v);
    CHECK(report.sup_normalized == best);
}

TEST_CASE("local_law_error rejects out-of-strip points with their index") {
    ResolventInput rin = two_point_input();
    std::vector<Complex> grid{Complex(0.0, 1.0), Complex(4.0, 1.0)};
    try {
        local_law_error(rin, grid, 2, 0.2);
        FAIL("expected a DomainError for the out-of-strip point");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("point 1") != std::string::npos);
    }
    // Below the eta floor N^{-1+zeta} and above the cap are both rejected.
    std::vector<Complex> low{Complex(0.0, 1e-12)};
    CHECK_THROWS_AS(local_law_error(rin, low, 1000, 0.2), DomainError);
    std::vector<Complex> high{Complex(0.0, 2e4)};
    CHECK_THROWS_AS(local_law_error(rin, high, 1000, 0.2), DomainError);
}
