#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rankone {

using Complex = std::complex<double>;

// Base class for all library failures; subcommands map these to exit code 1.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad configuration value (unknown ensemble tag, n too small, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Argument outside a function's mathematical domain.
class DomainError : public Error {
public:
    using Error::Error;
};

// Evaluation point too close to a pole of the weighted resolvent.
class PoleProximityError : public Error {
public:
    PoleProximityError(const std::string& what, double distance)
        : Error(what), distance(distance) {}
    double distance;
};

// Two eigenvalues closer than the collision tolerance; carries (j, k, t).
class CollisionError : public Error {
public:
    CollisionError(const std::string& what, int j, int k, double t)
        : Error(what), j(j), k(k), t(t) {}
    int j;
    int k;
    double t;
};

// ODE right-hand side evaluated at a (near-)degenerate configuration.
class SingularityError : public Error {
public:
    SingularityError(const std::string& what, double t) : Error(what), t(t) {}
    double t;
};

// Iterative numeric procedure failed to converge; index < 0 when the
// failing component is not identifiable.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, int index = -1)
        : Error(what), index(index) {}
    int index;
};

enum class Ensemble { Gue, WignerReal, WignerComplexUniform };

inline const char* to_string(Ensemble e) {
    switch (e) {
        case Ensemble::Gue: return "gue";
        case Ensemble::WignerReal: return "wigner-real";
        case Ensemble::WignerComplexUniform: return "wigner-complex-uniform";
    }
    return "?";
}

inline Ensemble ensemble_from_string(std::string_view tag) {
    if (tag == "gue") return Ensemble::Gue;
    if (tag == "wigner-real") return Ensemble::WignerReal;
    if (tag == "wigner-complex-uniform") return Ensemble::WignerComplexUniform;
    throw ConfigError("unknown ensemble tag: " + std::string(tag));
}

// Name of the generator algorithm, recorded verbatim in every output.
inline constexpr const char* kRngAlgorithm = "splitmix64+box-muller";

struct RunConfig {
    int n = 2;
    Ensemble ensemble = Ensemble::Gue;
    std::uint64_t seed = 0;
    std::string rng = kRngAlgorithm;
};

}  // namespace rankone
