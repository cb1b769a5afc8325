#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "dps/linalg.hpp"
#include "dps/phasespace.hpp"

namespace dps {

// Collective two-level model in the ground-state multiplet j = Np/2, with
// all energies measured in units of the level splitting. chi is the scaled
// two-body coupling.
struct LMGParams {
    int np = 0;
    double chi = 0.0;

    int dim() const { return np + 1; }

    void validate() const {
        if (np < 2 || np % 2 != 0) throw InvalidParams("LMGParams: Np must be even and >= 2");
        if (!std::isfinite(chi)) throw InvalidParams("LMGParams: chi must be finite");
    }
};

// H = J_z + (chi / 2 Np) (J_+^2 + J_-^2) in the J_z basis m = -j..j.
// Real symmetric, tridiagonal in steps of two: only |dm| = 2 couplings.
inline ComplexMatrix build_hamiltonian(const LMGParams& p) {
    p.validate();
    const int n = p.dim();
    const double j = p.np / 2.0;
    ComplexMatrix h(n);
    for (int k = 0; k < n; ++k) {
        const double m = k - j;
        h(k, k) = m;
        if (k + 2 < n) {
            // <m+2| J_+^2 |m>
            const double c = std::sqrt((j - m) * (j + m + 1.0)) *
                             std::sqrt((j - m - 1.0) * (j + m + 2.0));
            const double v = p.chi / (2.0 * p.np) * c;
            h(k + 2, k) = v;
            h(k, k + 2) = v;
        }
    }
    return h;
}

// Pi = exp(i pi J_z): diagonal signs (-1)^m. Commutes with the Hamiltonian
// and splits it into even-m and odd-m blocks.
inline ComplexMatrix parity_operator(int n) {
    require_odd_dimension(n, "parity_operator");
    const int l = half_side(n);
    ComplexMatrix pi(n);
    for (int m = -l; m <= l; ++m) pi(m + l, m + l) = (std::abs(m) % 2 == 0) ? 1.0 : -1.0;
    return pi;
}

inline bool check_parity(const ComplexMatrix& h_l) {
    const ComplexMatrix pi = parity_operator(static_cast<int>(h_l.dim()));
    ComplexMatrix comm = h_l * pi - pi * h_l;
    return max_abs(comm) <= 1e-12;
}

// Sorted spectrum with per-state parity labels. Each parity block is
// diagonalized separately, so eigenvectors are exactly block-pure even when
// doublets are nearly degenerate.
struct LMGSpectrum {
    int np = 0;
    double chi = 0.0;
    std::vector<double> values;   // ascending
    ComplexMatrix vectors;        // columns, J_z basis
    std::vector<int> parity;      // +1 even-m support, -1 odd-m support

    int dim() const { return np + 1; }
    double gap() const { return values.at(1) - values.at(0); }
};

inline LMGSpectrum spectrum(const LMGParams& p, const Tolerances& tol = default_tolerances()) {
    p.validate();
    const ComplexMatrix h = build_hamiltonian(p);
    const int n = p.dim();
    const int l = half_side(n);

    LMGSpectrum spec;
    spec.np = p.np;
    spec.chi = p.chi;
    spec.vectors = ComplexMatrix(n);

    struct Entry {
        double value;
        int parity;
        std::vector<Complex> vec;
    };
    std::vector<Entry> entries;
    entries.reserve(n);

    for (int block_parity : {+1, -1}) {
        std::vector<int> idx;  // basis rows belonging to this block
        for (int m = -l; m <= l; ++m)
            if (((std::abs(m) % 2 == 0) ? +1 : -1) == block_parity) idx.push_back(m + l);
        if (idx.empty()) continue;
        ComplexMatrix sub(idx.size());
        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t b = 0; b < idx.size(); ++b) sub(a, b) = h(idx[a], idx[b]);
        const auto d = eig_hermitian(sub, tol);
        for (std::size_t k = 0; k < idx.size(); ++k) {
            Entry e;
            e.value = d.values[k].real();
            e.parity = block_parity;
            e.vec.assign(n, Complex{});
            for (std::size_t a = 0; a < idx.size(); ++a) e.vec[idx[a]] = d.vectors(a, k);
            entries.push_back(std::move(e));
        }
    }

    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.value != b.value) return a.value < b.value;
        return a.parity > b.parity;
    });

    spec.values.reserve(n);
    spec.parity.reserve(n);
    for (int k = 0; k < n; ++k) {
        spec.values.push_back(entries[k].value);
        spec.parity.push_back(entries[k].parity);
        for (int r = 0; r < n; ++r) spec.vectors(r, k) = entries[k].vec[r];
    }
    detail::normalize_vector_phases(spec.vectors);
    return spec;
}

// rho = |psi><psi| with |psi> = (|E_i> + e^{i phase} |E_j>)/sqrt(2).
inline DensityMatrix initial_state(const LMGSpectrum& spec, int i, int j, double phase = 0.0) {
    const int n = spec.dim();
    if (i < 0 || j <= i || j >= n)
        throw IndexOutOfRange("initial_state: need 0 <= i < j < N");
    const Complex w = std::polar(1.0 / std::sqrt(2.0), phase);
    std::vector<Complex> psi(n);
    for (int r = 0; r < n; ++r)
        psi[r] = spec.vectors(r, i) / std::sqrt(2.0) + w * spec.vectors(r, j);
    ComplexMatrix rho(n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) rho(r, c) = psi[r] * std::conj(psi[c]);
    return DensityMatrix::checked(std::move(rho));
}

// Angle-based potential and inverse effective mass profiles.
inline double lmg_potential(const LMGParams& p, double phi) {
    const double s = std::sin(phi);
    return -0.5 * (p.np + 1.0) *
           (std::cos(phi) + 0.5 * p.chi * (p.np + 3.0) / (p.np + 1.0) * s * s);
}

inline double lmg_inverse_mass(const LMGParams& p, double phi) {
    const double s = std::sin(phi);
    return 2.0 / (p.np - 1.0) * (std::cos(phi) + p.chi * (1.0 + s * s));
}

struct AngleProfile {
    int np = 0;
    double chi = 0.0;
    std::vector<double> phi;
    std::vector<double> v;
    std::vector<double> minv;
};

inline AngleProfile potential_profile(const LMGParams& p, int samples) {
    p.validate();
    if (samples < 3) throw InvalidParams("potential_profile: need at least 3 samples");
    AngleProfile prof;
    prof.np = p.np;
    prof.chi = p.chi;
    prof.phi.reserve(samples);
    prof.v.reserve(samples);
    prof.minv.reserve(samples);
    const double pi = std::numbers::pi;
    for (int k = 0; k < samples; ++k) {
        const double phi = -pi + 2.0 * pi * k / (samples - 1);
        prof.phi.push_back(phi);
        prof.v.push_back(lmg_potential(p, phi));
        prof.minv.push_back(lmg_inverse_mass(p, phi));
    }
    return prof;
}

// The central barrier exists when chi (Np+3)/(Np+1) > 1; then the wells sit
// at cos(phi*) = (Np+1)/(chi (Np+3)) and V(phi*) < V(0).
struct BarrierReport {
    bool has_barrier = false;
    double barrier_height = 0.0;        // V(0)
    double well_depth = 0.0;            // V(phi*), or V(0) without a barrier
    double phi_star = 0.0;
    std::vector<int> levels_below_barrier;  // indices k with V(phi*) < E_k < V(0)
};

inline BarrierReport barrier_report(const AngleProfile& prof, const LMGSpectrum& spec) {
    if (prof.np != spec.np || prof.chi != spec.chi)
        throw InvalidParams("barrier_report: profile and spectrum parameters differ");
    const LMGParams p{prof.np, prof.chi};
    BarrierReport rep;
    rep.barrier_height = lmg_potential(p, 0.0);
    const double c = p.chi * (p.np + 3.0) / (p.np + 1.0);
    if (c > 1.0) {
        rep.has_barrier = true;
        rep.phi_star = std::acos(1.0 / c);
        rep.well_depth = lmg_potential(p, rep.phi_star);
        for (int k = 0; k < spec.dim(); ++k)
            if (spec.values[k] > rep.well_depth && spec.values[k] < rep.barrier_height)
                rep.levels_below_barrier.push_back(k);
    } else {
        rep.well_depth = rep.barrier_height;
    }
    return rep;
}

} // namespace dps
