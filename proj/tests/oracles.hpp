// Test-only oracles, kept independent of the library implementation paths
// they are used to check.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "dps/linalg.hpp"

namespace oracle {

using dps::Complex;
using dps::ComplexMatrix;

// Cofactor-expansion determinant; fine for N <= 6.
inline Complex det_cofactor(const ComplexMatrix& m) {
    const std::size_t n = m.dim();
    if (n == 1) return m(0, 0);
    Complex acc{};
    for (std::size_t col = 0; col < n; ++col) {
        ComplexMatrix minor(n - 1);
        for (std::size_t r = 1; r < n; ++r) {
            std::size_t cc = 0;
            for (std::size_t c = 0; c < n; ++c) {
                if (c == col) continue;
                minor(r - 1, cc++) = m(r, c);
            }
        }
        const Complex term = m(0, col) * det_cofactor(minor);
        acc += (col % 2 == 0) ? term : -term;
    }
    return acc;
}

// det(A - x I), real for Hermitian A and real x.
inline double charpoly(const ComplexMatrix& a, double x) {
    ComplexMatrix m = a;
    for (std::size_t i = 0; i < m.dim(); ++i) m(i, i) -= x;
    return det_cofactor(m).real();
}

inline Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
    Eigen::MatrixXcd e(m.dim(), m.dim());
    for (std::size_t r = 0; r < m.dim(); ++r)
        for (std::size_t c = 0; c < m.dim(); ++c) e(r, c) = m(r, c);
    return e;
}

inline std::vector<double> eigen_hermitian_values(const ComplexMatrix& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_eigen(m));
    std::vector<double> v(solver.eigenvalues().data(),
                          solver.eigenvalues().data() + m.dim());
    return v;
}

inline std::vector<Complex> eigen_general_values(const ComplexMatrix& m) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(to_eigen(m));
    std::vector<Complex> v(solver.eigenvalues().data(), solver.eigenvalues().data() + m.dim());
    std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return v;
}

// Literal transcription of the weight display: complex phase factors and a
// double-sided theta series with a fixed (generous) term count.
inline Complex theta_series_literal(int kind, double z, double a, int terms) {
    Complex sum{};
    for (int n = -terms; n <= terms; ++n) {
        const double amp = std::exp(-std::numbers::pi * a * n * n);
        const Complex phase = std::polar(1.0, 2.0 * std::numbers::pi * n * z);
        const double sign = (kind == 4 && (((n % 2) + 2) % 2 == 1)) ? -1.0 : 1.0;
        sum += sign * amp * phase;
    }
    return sum;
}

inline Complex weight_literal(int n, int eta, int xi, int terms = 61) {
    const double a = 1.0 / (2.0 * n);
    const Complex t3e = theta_series_literal(3, a * eta, a, terms);
    const Complex t4e = theta_series_literal(4, a * eta, a, terms);
    const Complex t3x = theta_series_literal(3, a * xi, a, terms);
    const Complex t4x = theta_series_literal(4, a * xi, a, terms);
    const Complex pe = std::polar(1.0, std::numbers::pi * eta);
    const Complex px = std::polar(1.0, std::numbers::pi * xi);
    const Complex pexn = std::polar(1.0, std::numbers::pi * (eta + xi + n));
    return 0.5 * std::sqrt(a) *
           (t3e * (t3x + t4x * pe) + t4e * (t3x * px + t4x * pexn));
}

} // namespace oracle
