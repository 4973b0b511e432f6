#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>

#include "rankone/types.hpp"

namespace rankone {

// Entry law for the Wigner sampler. All laws are continuous, mean zero,
// with E|h_ij|^2 = 1/n, so the bulk spectrum approaches the semicircle
// on [-2, 2].
enum class EntryLaw { GaussianComplex, UniformComplex, GaussianReal };

inline EntryLaw entry_law_of(Ensemble e) {
    switch (e) {
        case Ensemble::Gue: return EntryLaw::GaussianComplex;
        case Ensemble::WignerReal: return EntryLaw::GaussianReal;
        case Ensemble::WignerComplexUniform: return EntryLaw::UniformComplex;
    }
    throw ConfigError("unmapped ensemble");
}

// Hermitian by construction: h(j,i) is stored as conj(h(i,j)) and the
// diagonal imaginary parts are exactly zero.
struct HermitianMatrix {
    Eigen::MatrixXcd entries;

    int n() const { return static_cast<int>(entries.rows()); }
    double frobenius_norm() const { return entries.norm(); }
    bool hermitian_exact() const;
};

struct UnitVector {
    Eigen::VectorXcd entries;

    int n() const { return static_cast<int>(entries.size()); }
};

// Eigenvalues (ascending), orthonormal eigenvectors, and overlap weights
// c_j = |<u_j|v>|^2. Immutable input to all dynamics.
struct SpectralData {
    Eigen::VectorXd mus;
    Eigen::MatrixXcd eigvecs;
    Eigen::VectorXd weights;

    int n() const { return static_cast<int>(mus.size()); }
    double min_gap() const;
};

// GUE draw: off-diagonal (x+iy)/sqrt(2n), diagonal real N(0, 1/n).
// The diagonal law is a convention; the bulk statistics do not depend on it.
HermitianMatrix sample_gue(int n, std::uint64_t seed);

// General Wigner draw with the given entry law. GaussianComplex coincides
// with sample_gue (same seed, same bits).
HermitianMatrix sample_wigner(int n, EntryLaw law, std::uint64_t seed);

// Uniform on the complex unit sphere: normalized standard Gaussian vector.
UnitVector sample_unit_vector(int n, std::uint64_t seed);

// Full spectrum, ascending, with orthonormal eigenvectors. Backed by a
// dense Hermitian solver (Householder tridiagonalization + implicit QR);
// residual and orthonormality are within n * 1e-13 * ||H||_F.
std::pair<Eigen::VectorXd, Eigen::MatrixXcd> hermitian_eigen(const HermitianMatrix& H);

// c_j = |<u_j|v>|^2; sums to one for any orthonormal basis and unit v.
Eigen::VectorXd overlaps(const Eigen::MatrixXcd& eigvecs, const UnitVector& v);

// Eigendecomposition + overlaps, with invariant checks (ordering, weight
// sum, residual). Throws ConvergenceError if the spectrum violates the
// strict-gap contract.
SpectralData make_spectral_data(const HermitianMatrix& H, const UnitVector& v);

// One (H, v) draw for the given config. Near-degenerate spectra
// (gap < 1e-12 * ||H||_F) are resampled with seed+1; the event count is
// recorded. H and v streams are derived from the config seed by splitting.
struct SampledSystem {
    HermitianMatrix H;
    UnitVector v;
    SpectralData spec;
    std::uint64_t seed_used = 0;
    int resample_events = 0;
};

SampledSystem sample_system(const RunConfig& config);

}  // namespace rankone
