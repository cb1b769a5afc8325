#pragma once

#include <string>
#include <vector>

#include "dps/dynamics.hpp"
#include "dps/lmg.hpp"
#include "dps/phasespace.hpp"
#include "dps/random.hpp"
#include "dps/schwinger.hpp"

namespace dps {

// One row of the validation table: a named measurement against its bound.
struct CheckResult {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    bool pass = false;
};

inline CheckResult check_leq(std::string name, double measured, double bound) {
    return {std::move(name), measured, bound, measured <= bound};
}

inline CheckResult check_geq(std::string name, double measured, double bound) {
    return {std::move(name), measured, bound, measured >= bound};
}

// Kernel-table invariants at one dimension: unit traces, T^(0) Hermitian,
// T^(-1) PSD with spectrum in [0,1], resolution of identity, and reality of
// the smoothing kernel together with its normalization and shift structure.
inline std::vector<CheckResult> kernel_invariant_checks(
    int n, ThetaConvention conv = ThetaConvention::two_pi_nz,
    const Tolerances& tol = default_tolerances()) {
    const auto table = build_kernel_table(n, {-1.0, 0.0, 1.0}, conv);
    const int l = half_side(n);
    const std::string tag = "N=" + std::to_string(n) + " ";

    double trace_dev = 0.0, herm_dev = 0.0, sum_dev = 0.0;
    double min_eig = 1e300, max_eig = -1e300;
    for (double s : {-1.0, 0.0, 1.0}) {
        ComplexMatrix sum(n);
        for (int mu = -l; mu <= l; ++mu)
            for (int nu = -l; nu <= l; ++nu) {
                const auto& t = table.T(s, mu, nu);
                trace_dev = std::max(trace_dev, std::abs(trace(t) - Complex(1.0, 0.0)));
                sum += t;
            }
        sum -= ComplexMatrix::identity(n) * Complex(double(n), 0.0);
        sum_dev = std::max(sum_dev, max_abs(sum));
    }
    for (int mu = -l; mu <= l; ++mu)
        for (int nu = -l; nu <= l; ++nu) {
            herm_dev = std::max(herm_dev, hermitian_deviation(table.T(0.0, mu, nu)));
            const auto& tm1 = table.T(-1.0, mu, nu);
            if (hermitian_deviation(tm1) <= tol.kernel_hermitian) {
                const auto d = eig_hermitian(tm1, tol);
                min_eig = std::min(min_eig, d.values.front().real());
                max_eig = std::max(max_eig, d.values.back().real());
            } else {
                min_eig = std::min(min_eig, -1.0);
                max_eig = std::max(max_eig, 2.0);
            }
        }

    std::vector<CheckResult> out;
    out.push_back(check_leq(tag + "trace(T^s) = 1", trace_dev, tol.kernel_trace));
    out.push_back(check_leq(tag + "T^0 Hermitian", herm_dev, tol.kernel_hermitian));
    out.push_back(check_geq(tag + "T^-1 PSD (min eig)", min_eig, tol.kernel_psd_floor));
    out.push_back(check_leq(tag + "T^-1 spectrum <= 1", max_eig, 1.0 - tol.kernel_psd_floor));
    out.push_back(check_leq(tag + "sum T^s = N Id", sum_dev, tol.kernel_resolution));

    // smoothing kernel: real, row sums N, dependence on label differences only
    const auto ek = smoothing_kernel(table);
    double col_sum_dev = 0.0, shift_dev = 0.0;
    for (int mup = -l; mup <= l; ++mup)
        for (int nup = -l; nup <= l; ++nup) {
            double s = 0.0;
            for (int mu = -l; mu <= l; ++mu)
                for (int nu = -l; nu <= l; ++nu) s += ek(mu, nu, mup, nup);
            col_sum_dev = std::max(col_sum_dev, std::abs(s - double(n)));
            for (int mu = -l; mu <= l; ++mu)
                for (int nu = -l; nu <= l; ++nu)
                    shift_dev = std::max(
                        shift_dev, std::abs(ek(mu, nu, mup, nup) -
                                            ek(recenter(mu - mup, n), recenter(nu - nup, n), 0, 0)));
        }
    out.push_back(check_leq(tag + "E real", ek.max_imag, tol.kernel_real_residue));
    out.push_back(check_leq(tag + "sum_(mu,nu) E = N", col_sum_dev, tol.kernel_resolution));
    out.push_back(check_leq(tag + "E shift-invariant", shift_dev, tol.dual_path));
    return out;
}

// Probability-grid contracts over random density matrices: normalization,
// range, the smoothing route vs the direct kernel route, the characteristic
// function route vs the kernel route, and Eq.-(8)-style nonnegativity.
inline std::vector<CheckResult> probability_checks(int n, int count, Rng& rng,
                                                   const Tolerances& tol = default_tolerances()) {
    const auto table = build_kernel_table(n);
    const auto ek = smoothing_kernel(table);
    const std::string tag = "N=" + std::to_string(n) + " ";

    double norm_dev = 0.0, range_low = 1e300, range_high = -1e300;
    double smooth_dev = 0.0, char_dev = 0.0, min_mutual = 1e300;
    double wigner_imag = 0.0, wigner_sum_dev = 0.0;
    for (int k = 0; k < count; ++k) {
        const DensityMatrix rho = random_density(n, rng);
        const RealGrid h = husimi_prob(rho, table, tol);
        norm_dev = std::max(norm_dev, std::abs(h.sum() - 1.0));
        for (double v : h.values) {
            range_low = std::min(range_low, v);
            range_high = std::max(range_high, v);
        }
        const RealGrid hs = husimi_via_smoothing(rho, table, ek);
        for (std::size_t i = 0; i < h.values.size(); ++i)
            smooth_dev = std::max(smooth_dev, std::abs(h.values[i] - hs.values[i]));
        for (double s : {-1.0, 0.0, 1.0}) {
            const RealGrid direct = quasiprob(rho, s, table);
            const RealGrid via = quasiprob_via_characteristic(rho, s, table);
            for (std::size_t i = 0; i < direct.values.size(); ++i)
                char_dev = std::max(char_dev, std::abs(direct.values[i] - via.values[i]));
        }
        const RealGrid w = quasiprob(rho, 0.0, table);
        wigner_imag = std::max(wigner_imag, w.imag_residue);
        wigner_sum_dev = std::max(wigner_sum_dev, std::abs(w.sum() - double(n)));
        // I >= 0 is exactly entropy subadditivity for the h marginals
        min_mutual = std::min(min_mutual, mutual_correlation(h, tol));
    }

    std::vector<CheckResult> out;
    out.push_back(check_leq(tag + "sum h = 1", norm_dev, tol.grid_norm));
    out.push_back(check_geq(tag + "h >= 0", range_low, 0.0));
    out.push_back(check_leq(tag + "h <= 1", range_high, 1.0));
    out.push_back(check_leq(tag + "smoothing route = direct route", smooth_dev, tol.dual_path));
    out.push_back(check_leq(tag + "DFT route = trace route", char_dev, tol.dual_path));
    out.push_back(check_leq(tag + "Wigner real", wigner_imag, tol.kernel_real_residue));
    out.push_back(check_leq(tag + "sum W = N", wigner_sum_dev, tol.kernel_resolution * 10));
    out.push_back(check_geq(tag + "mutual correlation >= 0", min_mutual, -1e-10));
    return out;
}

// Structural facts about the model spectrum: mirror symmetry, parity block
// purity, the exact 3-level closed form, and monotone gap vs coupling.
inline std::vector<CheckResult> lmg_structure_checks(const Tolerances& tol = default_tolerances()) {
    std::vector<CheckResult> out;

    {
        const LMGParams p{20, 1.5};
        const auto spec = spectrum(p, tol);
        double mirror = 0.0;
        for (std::size_t k = 0; k < spec.values.size(); ++k)
            mirror = std::max(mirror,
                              std::abs(spec.values[k] + spec.values[spec.values.size() - 1 - k]));
        out.push_back(check_leq("Np=20 mirror symmetry", mirror, tol.mirror_symmetry));

        const ComplexMatrix h = build_hamiltonian(p);
        out.push_back(check_leq("Np=20 [H, Pi] = 0",
                                max_abs(h * parity_operator(p.dim()) - parity_operator(p.dim()) * h),
                                1e-12));

        double purity_dev = 0.0;
        const int l = half_side(p.dim());
        for (int k = 0; k < p.dim(); ++k) {
            double wrong = 0.0;
            for (int m = -l; m <= l; ++m) {
                const int par = (std::abs(m) % 2 == 0) ? +1 : -1;
                if (par != spec.parity[k]) wrong += std::norm(spec.vectors(m + l, k));
            }
            purity_dev = std::max(purity_dev, wrong);
        }
        out.push_back(check_leq("Np=20 parity block purity", purity_dev, tol.parity_purity));
    }

    {
        double closed_dev = 0.0;
        for (double chi : {0.0, 0.5, 1.0, 2.0}) {
            const auto spec = spectrum(LMGParams{2, chi}, tol);
            const double e = std::sqrt(1.0 + chi * chi / 4.0);
            closed_dev = std::max(closed_dev, std::abs(spec.values[0] + e));
            closed_dev = std::max(closed_dev, std::abs(spec.values[1]));
            closed_dev = std::max(closed_dev, std::abs(spec.values[2] - e));
        }
        out.push_back(check_leq("Np=2 closed form", closed_dev, 1e-10));
    }

    {
        double prev = 1e300;
        bool monotone = true;
        for (int k = 1; k <= 10; ++k) {
            const double gap = spectrum(LMGParams{20, 0.2 * k}).gap();
            if (gap >= prev) monotone = false;
            prev = gap;
        }
        out.push_back(check_geq("Np=20 gap(chi) decreasing", monotone ? 1.0 : 0.0, 1.0));
    }

    return out;
}

// Full cross-module suite used by the `validate` subcommand. The flipped
// theta convention is reachable for the convention-pinning experiment.
struct ValidationOptions {
    std::uint64_t seed = 1;
    std::vector<int> dims{3, 5, 7, 21};
    int random_states = 25;
    ThetaConvention convention = ThetaConvention::two_pi_nz;
};

inline std::vector<CheckResult> run_validation_suite(const ValidationOptions& opt,
                                                     const Tolerances& tol = default_tolerances()) {
    std::vector<CheckResult> out;
    for (int n : opt.dims) {
        auto kc = kernel_invariant_checks(n, opt.convention, tol);
        out.insert(out.end(), kc.begin(), kc.end());
    }
    Rng rng(opt.seed);
    for (int n : opt.dims) {
        if (n > 9) continue;  // random-state grid checks stay at desk dimensions
        auto pc = probability_checks(n, opt.random_states, rng, tol);
        out.insert(out.end(), pc.begin(), pc.end());
    }
    auto lc = lmg_structure_checks(tol);
    out.insert(out.end(), lc.begin(), lc.end());
    return out;
}

} // namespace dps
