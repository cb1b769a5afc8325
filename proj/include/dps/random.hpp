#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "dps/phasespace.hpp"

namespace dps {

// Deterministic random source: mt19937_64 is bit-reproducible by standard,
// and the uniform/normal transforms are spelled out here so results do not
// depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() {  // [0, 1)
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    Complex normal_complex() {
        const double re = normal();
        const double im = normal();
        return {re, im};
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

inline ComplexMatrix random_matrix(std::size_t n, Rng& rng) {
    ComplexMatrix g(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = rng.normal_complex();
    return g;
}

inline ComplexMatrix random_hermitian(std::size_t n, Rng& rng) {
    ComplexMatrix g = random_matrix(n, rng);
    ComplexMatrix h = g;
    h += adjoint(g);
    h *= Complex(0.5, 0.0);
    return h;
}

// rho = G G^dagger / tr(G G^dagger): Hermitian, PSD, unit trace.
inline DensityMatrix random_density(std::size_t n, Rng& rng) {
    const ComplexMatrix g = random_matrix(n, rng);
    ComplexMatrix rho = g * adjoint(g);
    const double tr = trace(rho).real();
    rho *= Complex(1.0 / tr, 0.0);
    // exact unit trace and Hermiticity after the division
    for (std::size_t i = 0; i < n; ++i) rho(i, i) = Complex(rho(i, i).real(), 0.0);
    double diag = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) diag += rho(i, i).real();
    rho(n - 1, n - 1) = Complex(1.0 - diag, 0.0);
    return DensityMatrix::checked(std::move(rho));
}

inline DensityMatrix random_pure_density(std::size_t n, Rng& rng) {
    std::vector<Complex> psi(n);
    double norm2 = 0.0;
    for (auto& c : psi) {
        c = rng.normal_complex();
        norm2 += std::norm(c);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    ComplexMatrix rho(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) rho(r, c) = psi[r] * std::conj(psi[c]) * (inv * inv);
    for (std::size_t i = 0; i < n; ++i) rho(i, i) = Complex(rho(i, i).real(), 0.0);
    return DensityMatrix::checked(std::move(rho));
}

} // namespace dps
