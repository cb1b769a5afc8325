#pragma once

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dps/linalg.hpp"
#include "dps/schwinger.hpp"

namespace dps {

// Density operator with the usual contracts: Hermitian, unit trace, PSD.
// Construction checks the cheap invariants; positivity is verified by
// min_eigenvalue() where a test or caller needs it.
struct DensityMatrix {
    ComplexMatrix matrix;

    static DensityMatrix checked(ComplexMatrix m,
                                 const Tolerances& tol = default_tolerances()) {
        if (!all_finite(m)) throw InvalidParams("DensityMatrix: non-finite entries");
        if (hermitian_deviation(m) > tol.hermitian_input)
            throw NotHermitian("DensityMatrix: not Hermitian");
        if (std::abs(trace(m) - Complex(1.0, 0.0)) > tol.hermitian_input)
            throw NotNormalized("DensityMatrix: trace != 1");
        return DensityMatrix{std::move(m)};
    }

    std::size_t dim() const { return matrix.dim(); }

    double min_eigenvalue(const Tolerances& tol = default_tolerances()) const {
        return eig_hermitian(matrix, tol).values.front().real();
    }

    double purity() const { return trace_product(matrix, matrix).real(); }
};

// N x N grid over (mu,nu) in [-l,l]^2, row-major with mu ascending then nu.
struct ComplexGrid {
    int n = 0;
    std::vector<Complex> values;

    Complex& at(int mu, int nu) { return values[cell_index(mu, nu, n)]; }
    const Complex& at(int mu, int nu) const { return values[cell_index(mu, nu, n)]; }
};

struct RealGrid {
    int n = 0;
    std::vector<double> values;
    double imag_residue = 0.0;  // largest |Im| discarded when the grid was formed

    double& at(int mu, int nu) { return values[cell_index(mu, nu, n)]; }
    const double& at(int mu, int nu) const { return values[cell_index(mu, nu, n)]; }

    double sum() const {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
};

inline double l1_distance(const RealGrid& a, const RealGrid& b) {
    if (a.n != b.n) throw DimensionMismatch("l1_distance: grid dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) s += std::abs(a.values[i] - b.values[i]);
    return s;
}

// Xi^(s)(eta,xi) = Tr[S^(s)(eta,xi) rho]; Xi(0,0) = 1/sqrt(N) for any state.
inline ComplexGrid characteristic_function(const DensityMatrix& rho, double s,
                                           const KernelTable& table) {
    if (rho.dim() != static_cast<std::size_t>(table.n))
        throw DimensionMismatch("characteristic_function: dimension mismatch");
    const int n = table.n;
    const int l = half_side(n);
    const SchwingerPair pair = build_schwinger_pair(n);
    ComplexGrid xi;
    xi.n = n;
    xi.values.resize(static_cast<std::size_t>(n) * n);
    for (int eta = -l; eta <= l; ++eta)
        for (int nu = -l; nu <= l; ++nu)
            xi.at(eta, nu) = trace_product(build_S_s(s, eta, nu, pair, table.weight), rho.matrix);
    return xi;
}

// F^(s)(mu,nu) = Tr[T^(s)(mu,nu) rho], evaluated against the precomputed
// kernel table. Real for real s and Hermitian rho; the discarded imaginary
// part is recorded on the grid.
inline RealGrid quasiprob(const DensityMatrix& rho, double s, const KernelTable& table) {
    if (rho.dim() != static_cast<std::size_t>(table.n))
        throw DimensionMismatch("quasiprob: dimension mismatch");
    const int n = table.n;
    const int l = half_side(n);
    RealGrid f;
    f.n = n;
    f.values.resize(static_cast<std::size_t>(n) * n);
    for (int mu = -l; mu <= l; ++mu)
        for (int nu = -l; nu <= l; ++nu) {
            const Complex v = trace_product(table.T(s, mu, nu), rho.matrix);
            f.imag_residue = std::max(f.imag_residue, std::abs(v.imag()));
            f.at(mu, nu) = v.real();
        }
    return f;
}

// Same F^(s), but through the double discrete Fourier transform of the
// characteristic function. Shares only the weight table with the kernel
// route; used to cross-check quasiprob().
inline RealGrid quasiprob_via_characteristic(const DensityMatrix& rho, double s,
                                             const KernelTable& table) {
    const int n = table.n;
    const int l = half_side(n);
    const ComplexGrid xi = characteristic_function(rho, s, table);
    RealGrid f;
    f.n = n;
    f.values.resize(static_cast<std::size_t>(n) * n);
    const double pi = std::numbers::pi;
    for (int mu = -l; mu <= l; ++mu)
        for (int nu = -l; nu <= l; ++nu) {
            Complex acc{};
            for (int eta = -l; eta <= l; ++eta)
                for (int x = -l; x <= l; ++x)
                    acc += std::polar(1.0, -2.0 * pi * (double(eta) * mu + double(x) * nu) / n) *
                           xi.at(eta, x);
            acc /= std::sqrt(double(n));
            f.imag_residue = std::max(f.imag_residue, std::abs(acc.imag()));
            f.at(mu, nu) = acc.real();
        }
    return f;
}

// Probability-normalized Husimi matrix h = F^(-1)/N: entries in [0,1] and
// sum(h) = 1. Float noise within the clamp tolerance is rounded into range;
// anything larger is a contract violation and throws.
inline RealGrid husimi_prob(const DensityMatrix& rho, const KernelTable& table,
                            const Tolerances& tol = default_tolerances()) {
    RealGrid h = quasiprob(rho, -1.0, table);
    const double inv_n = 1.0 / table.n;
    for (double& v : h.values) {
        v *= inv_n;
        if (v < 0.0) {
            if (v < -tol.entropy_clamp) throw Error("husimi_prob: negative cell beyond tolerance");
            v = 0.0;
        } else if (v > 1.0) {
            if (v > 1.0 + tol.entropy_clamp) throw Error("husimi_prob: cell above 1");
            v = 1.0;
        }
    }
    if (std::abs(h.sum() - 1.0) > tol.grid_norm)
        throw NotNormalized("husimi_prob: grid does not sum to 1");
    return h;
}

// Husimi matrix by the smoothing route: coarse-grain the Wigner grid with
// E(mu,nu|mu',nu') and rescale. Must agree with husimi_prob at 1e-10.
inline RealGrid husimi_via_smoothing(const DensityMatrix& rho, const KernelTable& table,
                                     const SmoothingKernel& kernel) {
    if (kernel.n != table.n) throw DimensionMismatch("husimi_via_smoothing: dimension mismatch");
    const int n = table.n;
    const int l = half_side(n);
    const RealGrid w = quasiprob(rho, 0.0, table);
    RealGrid h;
    h.n = n;
    h.values.resize(static_cast<std::size_t>(n) * n);
    for (int mu = -l; mu <= l; ++mu)
        for (int nu = -l; nu <= l; ++nu) {
            double acc = 0.0;
            for (int mup = -l; mup <= l; ++mup)
                for (int nup = -l; nup <= l; ++nup)
                    acc += kernel(mu, nu, mup, nup) * w.at(mup, nup);
            h.at(mu, nu) = acc / (double(n) * double(n));
        }
    return h;
}

struct Marginals {
    std::vector<double> q;  // over mu (sum over nu)
    std::vector<double> r;  // over nu (sum over mu)
};

inline Marginals marginals(const RealGrid& h, const Tolerances& tol = default_tolerances()) {
    if (std::abs(h.sum() - 1.0) > tol.norm_check)
        throw NotNormalized("marginals: grid is not probability-normalized");
    const int n = h.n;
    const int l = half_side(n);
    Marginals m;
    m.q.assign(n, 0.0);
    m.r.assign(n, 0.0);
    for (int mu = -l; mu <= l; ++mu)
        for (int nu = -l; nu <= l; ++nu) {
            m.q[mu + l] += h.at(mu, nu);
            m.r[nu + l] += h.at(mu, nu);
        }
    return m;
}

// Masses on the negative / zero / positive halves of the angle axis.
struct AngleHalfMasses {
    double negative = 0.0;
    double zero = 0.0;
    double positive = 0.0;
};

inline AngleHalfMasses angle_half_masses(const RealGrid& h) {
    const int l = half_side(h.n);
    AngleHalfMasses m;
    for (int mu = -l; mu <= l; ++mu)
        for (int nu = -l; nu <= l; ++nu) {
            if (nu < 0)
                m.negative += h.at(mu, nu);
            else if (nu > 0)
                m.positive += h.at(mu, nu);
            else
                m.zero += h.at(mu, nu);
        }
    return m;
}

// -sum p ln p with 0 ln 0 := 0. Entries within the clamp tolerance below
// zero are treated as zero; anything below -negative_mass throws.
inline double shannon_entropy(std::span<const double> p,
                              const Tolerances& tol = default_tolerances()) {
    double e = 0.0;
    for (double v : p) {
        if (v < 0.0) {
            if (v < -tol.negative_mass)
                throw NegativeMass("shannon_entropy: negative probability mass");
            continue;
        }
        if (v > 0.0) e -= v * std::log(v);
    }
    return e;
}

inline double shannon_entropy(const std::vector<double>& p,
                              const Tolerances& tol = default_tolerances()) {
    return shannon_entropy(std::span<const double>(p), tol);
}

inline double joint_entropy(const RealGrid& h, const Tolerances& tol = default_tolerances()) {
    return shannon_entropy(std::span<const double>(h.values), tol);
}

// Hermitian/antihermitian split of the Husimi matrix plus the spectra of
// all three pieces. For a real matrix the split is symmetric/antisymmetric,
// sigma_b is pure imaginary, and sum(lambda) = sum(sigma_a) = tr h.
// a + b reassembles h to within one ulp per entry.
struct HusimiSplit {
    ComplexMatrix a;                // (h + h^T)/2
    ComplexMatrix b;                // (h - h^T)/2
    std::vector<Complex> lambda;    // eigenvalues of h
    std::vector<double> sigma_a;    // eigenvalues of a
    std::vector<Complex> sigma_b;   // eigenvalues of b (pure imaginary)
};

inline ComplexMatrix grid_as_matrix(const RealGrid& h) {
    const int n = h.n;
    ComplexMatrix m(n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m(r, c) = h.values[static_cast<std::size_t>(r) * n + c];
    return m;
}

inline std::pair<HusimiSplit, double> husimi_split_and_eigenentropy(
    const RealGrid& h, const Tolerances& tol = default_tolerances()) {
    const ComplexMatrix m = grid_as_matrix(h);
    const std::size_t n = m.dim();
    HusimiSplit split;
    split.a = ComplexMatrix(n);
    split.b = ComplexMatrix(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            split.a(r, c) = 0.5 * (m(r, c) + m(c, r));
            // b = m - a keeps a + b = m exact; b is antisymmetric to an ulp
            split.b(r, c) = m(r, c) - split.a(r, c);
        }
    split.lambda = eig_general(m, tol).values;
    const auto da = eig_hermitian(split.a, tol);
    split.sigma_a.reserve(n);
    for (const auto& v : da.values) split.sigma_a.push_back(v.real());
    // i*b is Hermitian, so the eigenvalues of b are -i times a real spectrum.
    ComplexMatrix ib = split.b * Complex(0.0, 1.0);
    const auto db = eig_hermitian(ib, tol);
    split.sigma_b.reserve(n);
    for (const auto& v : db.values) split.sigma_b.push_back(Complex(0.0, -v.real()));

    double entropy = 0.0;
    for (const auto& l : split.lambda) {
        const double mag = std::abs(l);
        if (mag > 0.0) entropy -= mag * std::log(mag);
    }
    return {std::move(split), entropy};
}

// Entropy of the eigenvalue magnitudes of h alone (no split bookkeeping).
inline double eigen_entropy(const RealGrid& h, const Tolerances& tol = default_tolerances()) {
    const auto lambda = eig_general(grid_as_matrix(h), tol).values;
    double entropy = 0.0;
    for (const auto& l : lambda) {
        const double mag = std::abs(l);
        if (mag > 0.0) entropy -= mag * std::log(mag);
    }
    return entropy;
}

// I[h] = E[Q] + E[R] - E[h] >= 0: the mutual information between the two
// marginals of the Husimi distribution.
inline double mutual_correlation(const RealGrid& h,
                                 const Tolerances& tol = default_tolerances()) {
    const Marginals m = marginals(h, tol);
    return shannon_entropy(m.q, tol) + shannon_entropy(m.r, tol) - joint_entropy(h, tol);
}

} // namespace dps
