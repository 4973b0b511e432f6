#include "rankone/rmt.hpp"

#include <cmath>
#include <string>

#include "rankone/rng.hpp"

namespace rankone {

bool HermitianMatrix::hermitian_exact() const {
    const int m = n();
    for (int i = 0; i < m; ++i) {
        if (entries(i, i).imag() != 0.0) return false;
        for (int j = i + 1; j < m; ++j)
            if (entries(j, i) != std::conj(entries(i, j))) return false;
    }
    return true;
}

double SpectralData::min_gap() const {
    double gap = std::numeric_limits<double>::infinity();
    for (int j = 0; j + 1 < n(); ++j) gap = std::min(gap, mus[j + 1] - mus[j]);
    return gap;
}

HermitianMatrix sample_gue(int n, std::uint64_t seed) {
    return sample_wigner(n, EntryLaw::GaussianComplex, seed);
}

HermitianMatrix sample_wigner(int n, EntryLaw law, std::uint64_t seed) {
    if (n < 2) throw ConfigError("sample_wigner: n must be >= 2, got " + std::to_string(n));
    SplitMix64 rng(seed);
    Eigen::MatrixXcd h(n, n);
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
    const double inv_sqrt_2n = 1.0 / std::sqrt(2.0 * n);
    // Uniform half-widths giving variance 1/(2n) per real part (off-diagonal)
    // and 1/n on the diagonal.
    const double uo = std::sqrt(3.0 / (2.0 * n));
    const double ud = std::sqrt(3.0 / n);
    // Fixed traversal order (row-major upper triangle) keeps draws
    // seed-deterministic.
    for (int i = 0; i < n; ++i) {
        switch (law) {
            case EntryLaw::GaussianComplex:
                h(i, i) = Complex(rng.normal() * inv_sqrt_n, 0.0);
                break;
            case EntryLaw::GaussianReal:
                h(i, i) = Complex(rng.normal() * inv_sqrt_n, 0.0);
                break;
            case EntryLaw::UniformComplex:
                h(i, i) = Complex(rng.uniform(-ud, ud), 0.0);
                break;
        }
        for (int j = i + 1; j < n; ++j) {
            Complex v;
            switch (law) {
                case EntryLaw::GaussianComplex:
                    v = rng.complex_normal() * inv_sqrt_2n;
                    break;
                case EntryLaw::GaussianReal:
                    v = Complex(rng.normal() * inv_sqrt_n, 0.0);
                    break;
                case EntryLaw::UniformComplex:
                    v = Complex(rng.uniform(-uo, uo), rng.uniform(-uo, uo));
                    break;
            }
            h(i, j) = v;
            h(j, i) = std::conj(v);
        }
    }
    return HermitianMatrix{std::move(h)};
}

UnitVector sample_unit_vector(int n, std::uint64_t seed) {
    if (n < 1) throw ConfigError("sample_unit_vector: n must be >= 1");
    SplitMix64 rng(seed);
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.complex_normal();
    v /= v.norm();
    return UnitVector{std::move(v)};
}

std::pair<Eigen::VectorXd, Eigen::MatrixXcd> hermitian_eigen(const HermitianMatrix& H) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H.entries);
    if (solver.info() != Eigen::Success)
        throw ConvergenceError("hermitian_eigen: QR iteration did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

Eigen::VectorXd overlaps(const Eigen::MatrixXcd& eigvecs, const UnitVector& v) {
    if (eigvecs.rows() != v.entries.size())
        throw ConfigError("overlaps: dimension mismatch");
    return (eigvecs.adjoint() * v.entries).cwiseAbs2();
}

SpectralData make_spectral_data(const HermitianMatrix& H, const UnitVector& v) {
    auto [mus, vecs] = hermitian_eigen(H);
    const int n = static_cast<int>(mus.size());
    const double scale = H.frobenius_norm();

    for (int j = 0; j + 1 < n; ++j)
        if (!(mus[j] < mus[j + 1]))
            throw ConvergenceError("make_spectral_data: eigenvalues not strictly increasing", j);

    const double residual = (H.entries * vecs - vecs * mus.asDiagonal()).norm();
    if (residual > n * 1e-13 * scale)
        throw ConvergenceError("make_spectral_data: eigenvector residual " +
                               std::to_string(residual) + " exceeds contract");

    const double ortho = (vecs.adjoint() * vecs -
                          Eigen::MatrixXcd::Identity(n, n)).norm();
    if (ortho > n * 1e-13 * scale)
        throw ConvergenceError("make_spectral_data: eigenvector orthonormality defect " +
                               std::to_string(ortho) + " exceeds contract");

    Eigen::VectorXd w = overlaps(vecs, v);
    const double wsum = w.sum();
    if (std::abs(wsum - 1.0) > 1e-12)
        throw ConvergenceError("make_spectral_data: overlap weights sum to " +
                               std::to_string(wsum));
    return SpectralData{std::move(mus), std::move(vecs), std::move(w)};
}

SampledSystem sample_system(const RunConfig& config) {
    if (config.n < 2) throw ConfigError("sample_system: n must be >= 2");
    std::uint64_t seed = config.seed;
    int resamples = 0;
    for (;;) {
        SplitMix64 root(seed);
        const std::uint64_t h_seed = root.next_u64();
        const std::uint64_t v_seed = root.next_u64();
        HermitianMatrix H = sample_wigner(config.n, entry_law_of(config.ensemble), h_seed);
        UnitVector v = sample_unit_vector(config.n, v_seed);
        SpectralData spec = make_spectral_data(H, v);
        // Distinct eigenvalues are an almost-sure event for continuous
        // ensembles; a near-degenerate draw is resampled, not repaired.
        if (spec.min_gap() > 1e-12 * H.frobenius_norm())
            return SampledSystem{std::move(H), std::move(v), std::move(spec), seed, resamples};
        ++resamples;
        ++seed;
        if (resamples > 16)
            throw ConvergenceError("sample_system: repeated near-degenerate spectra");
    }
}

}  // namespace rankone
