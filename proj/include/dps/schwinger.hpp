#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "dps/linalg.hpp"

namespace dps {

// Phase-space labels are integers congruent modulo N, re-centered into
// [-l, l] with l = (N-1)/2. N must be odd for the interval to be symmetric.
inline int half_side(int n) { return (n - 1) / 2; }

inline int recenter(long long k, int n) {
    long long r = k % n;
    if (r < 0) r += n;
    if (r > half_side(n)) r -= n;
    return static_cast<int>(r);
}

inline std::size_t cell_index(int mu, int nu, int n) {
    const int l = half_side(n);
    return static_cast<std::size_t>(mu + l) * n + static_cast<std::size_t>(nu + l);
}

inline void require_odd_dimension(int n, const char* who) {
    if (n % 2 == 0) throw EvenDimension(std::string(who) + ": N must be odd");
    if (n < 3) throw InvalidParams(std::string(who) + ": N must be >= 3");
}

// Clock/shift pair on an N-dimensional space: U is diagonal with
// U|m> = exp(2 pi i m / N)|m>, V shifts |m> -> |m+1> (re-centered), and
// U V = exp(2 pi i / N) V U.
struct SchwingerPair {
    int n = 0;
    ComplexMatrix u;
    ComplexMatrix v;
};

inline SchwingerPair build_schwinger_pair(int n) {
    require_odd_dimension(n, "build_schwinger_pair");
    const int l = half_side(n);
    SchwingerPair p;
    p.n = n;
    p.u = ComplexMatrix(n);
    p.v = ComplexMatrix(n);
    for (int m = -l; m <= l; ++m) {
        p.u(m + l, m + l) = std::polar(1.0, 2.0 * std::numbers::pi * m / n);
        p.v(recenter(m + 1, n) + l, m + l) = 1.0;
    }
    return p;
}

// Two series conventions for the theta functions: the angular factor is
// cos(2 pi n z) in the primary convention and cos(2 n z) in the alternate
// one. Only the primary passes the kernel invariant suite (T^(-1) positive
// semidefinite); the alternate is kept for the convention-pinning check.
enum class ThetaConvention { two_pi_nz, two_nz };

// theta_3 / theta_4 lattice sums with pure-imaginary nome parameter a > 0:
//   theta_3(z | ia) = sum_n exp(-pi a n^2) cos(angular(n z))
//   theta_4(z | ia) = same with alternating signs.
// The truncation index is chosen so every omitted term is below 1e-16.
inline double theta(int kind, double z, double a,
                    ThetaConvention conv = ThetaConvention::two_pi_nz) {
    if (kind != 3 && kind != 4) throw InvalidParams("theta: kind must be 3 or 4");
    if (!(a > 0.0)) throw NonPositiveNome("theta: nome parameter must be positive");
    const double pi = std::numbers::pi;
    const int nmax = static_cast<int>(std::ceil(std::sqrt(40.0 / (pi * a))));
    const double angular = conv == ThetaConvention::two_pi_nz ? 2.0 * pi : 2.0;
    double sum = 1.0;
    for (int k = 1; k <= nmax; ++k) {
        double term = 2.0 * std::exp(-pi * a * k * k) * std::cos(angular * k * z);
        if (kind == 4 && (k % 2 == 1)) term = -term;
        sum += term;
    }
    return sum;
}

// Weight table M(eta,xi) built from products of theta_3/theta_4 evaluated at
// integer arguments, with a = 1/(2N). The phase factors exp(i pi eta) etc.
// reduce to signs at integer labels, so the table is real by construction;
// K(eta,xi) = M(eta,xi)/M(0,0) normalizes K(0,0) = 1.
struct ThetaWeight {
    int n = 0;
    double a = 0.0;
    std::vector<double> m;  // M(eta,xi), cell-indexed
    double m00 = 0.0;

    double M(int eta, int xi) const { return m[cell_index(recenter(eta, n), recenter(xi, n), n)]; }
    double K(int eta, int xi) const { return M(eta, xi) / m00; }
};

inline ThetaWeight mapping_weight(int n, ThetaConvention conv = ThetaConvention::two_pi_nz) {
    require_odd_dimension(n, "mapping_weight");
    const int l = half_side(n);
    ThetaWeight w;
    w.n = n;
    w.a = 1.0 / (2.0 * n);
    w.m.resize(static_cast<std::size_t>(n) * n);
    auto sign = [](int k) { return (k % 2 == 0) ? 1.0 : -1.0; };
    for (int eta = -l; eta <= l; ++eta) {
        const double t3e = theta(3, w.a * eta, w.a, conv);
        const double t4e = theta(4, w.a * eta, w.a, conv);
        for (int xi = -l; xi <= l; ++xi) {
            const double t3x = theta(3, w.a * xi, w.a, conv);
            const double t4x = theta(4, w.a * xi, w.a, conv);
            // exp(i pi (eta+xi+N)) = -(-1)^(eta+xi) for odd N
            const double val = 0.5 * std::sqrt(w.a) *
                               (t3e * (t3x + t4x * sign(eta)) +
                                t4e * (t3x * sign(xi) - t4x * sign(eta + xi)));
            w.m[cell_index(eta, xi, n)] = val;
        }
    }
    w.m00 = w.m[cell_index(0, 0, n)];
    return w;
}

namespace detail {

// S(eta,xi) is the symmetrized displacement: with U V = w V U as built here,
// the ordering (1/sqrt(N)) exp(i pi eta xi / N) V^xi U^eta is the one that
// satisfies adjoint(S(eta,xi)) = S(-eta,-xi), which in turn makes T^(0)
// Hermitian and T^(-1) positive semidefinite.
inline Complex s_entry_phase(int eta, int xi, int m, int n) {
    const double pi = std::numbers::pi;
    return std::polar(1.0 / std::sqrt(double(n)),
                      pi * double(eta) * double(xi) / n + 2.0 * pi * double(m) * double(eta) / n);
}

// K^(-s) for the real weight K. Integer s is handled by plain powers so
// zero or negative weights stay well-defined there. Extended precision:
// the s = +1 kernels divide by weights as small as ~1e-7, and the resulting
// large intermediate terms must cancel back to order one in the kernel sums.
inline long double weight_power_l(double k, double s, const char* who) {
    if (s == 0.0) return 1.0L;
    const long double kl = k;
    const double rounded = std::round(s);
    if (std::abs(s - rounded) < 1e-12) {
        const int is = static_cast<int>(rounded);
        if (is > 0 && std::abs(k) < 1e-300)
            throw ZeroWeight(std::string(who) + ": K(eta,xi) = 0 with positive s");
        long double r = 1.0L;
        for (int i = 0; i < std::abs(is); ++i) r *= kl;
        return is > 0 ? 1.0L / r : r;
    }
    if (!(k > 0.0))
        throw InvalidParams(std::string(who) + ": non-integer s needs positive weight");
    return std::pow(kl, static_cast<long double>(-s));
}

inline double weight_power(double k, double s, const char* who) {
    return static_cast<double>(weight_power_l(k, s, who));
}

// cos(pi k / N) for k in [0, 2N): the only angles the kernel sums need,
// tabulated once with the argument reduced exactly in integer arithmetic.
inline std::vector<long double> cosine_table(int n) {
    std::vector<long double> ct(2 * n);
    for (int k = 0; k < 2 * n; ++k)
        ct[k] = std::cos(std::numbers::pi_v<long double> * k / n);
    return ct;
}

// One kernel operator T^(s)(mu,nu). Column m couples only to row m+xi for
// each xi, with the eta sum folded into cosines: +eta and -eta terms pair
// because the weight is even in eta. Accumulation runs in long double so
// the cancellation of the large K^(-s) terms survives.
inline ComplexMatrix t_cell(double s, int mu, int nu, int n,
                            const std::vector<long double>& ks,
                            const std::vector<long double>& ct) {
    const int l = half_side(n);
    ComplexMatrix t(n);
    for (int mc = -l; mc <= l; ++mc) {
        for (int xi = -l; xi <= l; ++xi) {
            const int row = recenter(mc + xi, n) + l;
            long double acc = ks[cell_index(0, xi, n)];
            for (int eta = 1; eta <= l; ++eta) {
                const long long arg = 1LL * eta * (xi + 2LL * (mc - mu));
                const int idx = static_cast<int>(((arg % (2 * n)) + 2 * n) % (2 * n));
                acc += 2.0L * ks[cell_index(eta, xi, n)] * ct[idx];
            }
            const Complex phase =
                std::polar(1.0, -2.0 * std::numbers::pi * double(xi) * nu / n);
            t(row, mc + l) = phase * Complex(static_cast<double>(acc / n), 0.0);
        }
    }
    return t;
}

inline std::vector<long double> weight_powers(double s, const ThetaWeight& weight,
                                              const char* who) {
    const int n = weight.n;
    const int l = half_side(n);
    std::vector<long double> ks(static_cast<std::size_t>(n) * n);
    for (int eta = -l; eta <= l; ++eta)
        for (int xi = -l; xi <= l; ++xi)
            ks[cell_index(eta, xi, n)] = weight_power_l(weight.K(eta, xi), s, who);
    return ks;
}

} // namespace detail

inline ComplexMatrix build_S(int eta, int xi, const SchwingerPair& pair) {
    const int n = pair.n;
    const int l = half_side(n);
    eta = recenter(eta, n);
    xi = recenter(xi, n);
    ComplexMatrix s(n);
    for (int m = -l; m <= l; ++m)
        s(recenter(m + xi, n) + l, m + l) = detail::s_entry_phase(eta, xi, m, n);
    return s;
}

inline ComplexMatrix build_S_s(double s, int eta, int xi, const SchwingerPair& pair,
                               const ThetaWeight& weight) {
    if (pair.n != weight.n) throw DimensionMismatch("build_S_s: pair/weight dimension mismatch");
    const double factor = detail::weight_power(weight.K(eta, xi), s, "build_S_s");
    return build_S(eta, xi, pair) * Complex(factor, 0.0);
}

inline ComplexMatrix build_T_s(double s, int mu, int nu, const SchwingerPair& pair,
                               const ThetaWeight& weight) {
    if (pair.n != weight.n) throw DimensionMismatch("build_T_s: pair/weight dimension mismatch");
    const int n = pair.n;
    const auto ks = detail::weight_powers(s, weight, "build_T_s");
    const auto ct = detail::cosine_table(n);
    return detail::t_cell(s, recenter(mu, n), recenter(nu, n), n, ks, ct);
}

// Precomputed T^(s)(mu,nu) operators for a fixed dimension and s set.
struct KernelTable {
    int n = 0;
    std::vector<double> s_values;
    bool untested_region = false;  // some s outside {-1, 0, +1}
    ThetaWeight weight;
    std::vector<std::vector<ComplexMatrix>> t;  // [s_index][cell]

    int s_index(double s) const {
        for (std::size_t i = 0; i < s_values.size(); ++i)
            if (s_values[i] == s) return static_cast<int>(i);
        throw InvalidParams("KernelTable: s value not built");
    }

    const ComplexMatrix& T(double s, int mu, int nu) const {
        return t[s_index(s)][cell_index(recenter(mu, n), recenter(nu, n), n)];
    }
};

inline KernelTable build_kernel_table(int n, std::vector<double> s_values = {-1.0, 0.0, 1.0},
                                      ThetaConvention conv = ThetaConvention::two_pi_nz) {
    require_odd_dimension(n, "build_kernel_table");
    const int l = half_side(n);
    KernelTable table;
    table.n = n;
    table.s_values = std::move(s_values);
    table.weight = mapping_weight(n, conv);

    const std::size_t cells = static_cast<std::size_t>(n) * n;
    for (double s : table.s_values)
        if (s != -1.0 && s != 0.0 && s != 1.0) table.untested_region = true;

    const auto ct = detail::cosine_table(n);
    table.t.reserve(table.s_values.size());
    for (double s : table.s_values) {
        const auto ks = detail::weight_powers(s, table.weight, "build_kernel_table");
        std::vector<ComplexMatrix> ts;
        ts.reserve(cells);
        for (int mu = -l; mu <= l; ++mu)
            for (int nu = -l; nu <= l; ++nu) ts.push_back(detail::t_cell(s, mu, nu, n, ks, ct));
        table.t.push_back(std::move(ts));
    }
    return table;
}

// E(mu,nu | mu',nu') = Tr[T^(0)(mu,nu) T^(-1)(mu',nu')], the coarse-graining
// kernel that carries the Wigner grid onto the Husimi grid.
struct SmoothingKernel {
    int n = 0;
    std::vector<double> e;      // [cell(mu,nu)][cell(mu',nu')]
    double max_imag = 0.0;      // largest imaginary residue seen while building

    double operator()(int mu, int nu, int mup, int nup) const {
        const std::size_t cells = static_cast<std::size_t>(n) * n;
        return e[cell_index(recenter(mu, n), recenter(nu, n), n) * cells +
                 cell_index(recenter(mup, n), recenter(nup, n), n)];
    }
};

inline SmoothingKernel smoothing_kernel(const KernelTable& table) {
    const int n = table.n;
    const int l = half_side(n);
    const std::size_t cells = static_cast<std::size_t>(n) * n;
    const auto& t0 = table.t[table.s_index(0.0)];
    const auto& tm1 = table.t[table.s_index(-1.0)];
    SmoothingKernel e;
    e.n = n;
    e.e.resize(cells * cells);
    for (int mu = -l; mu <= l; ++mu)
        for (int nu = -l; nu <= l; ++nu) {
            const std::size_t row = cell_index(mu, nu, n);
            for (int mup = -l; mup <= l; ++mup)
                for (int nup = -l; nup <= l; ++nup) {
                    const std::size_t col = cell_index(mup, nup, n);
                    const Complex tr = trace_product(t0[row], tm1[col]);
                    e.max_imag = std::max(e.max_imag, std::abs(tr.imag()));
                    e.e[row * cells + col] = tr.real();
                }
        }
    return e;
}

} // namespace dps
