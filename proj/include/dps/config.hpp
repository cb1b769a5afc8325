#pragma once

namespace dps {

inline constexpr const char* kVersion = "0.1.0";

// Numeric tolerances shared by every module. The defaults are the contract;
// callers may tighten or relax them through one record instead of scattering
// literals.
struct Tolerances {
    // eigensolvers
    double eig_residual_rel = 1e-10;      // residual <= this * ||M||_F
    double hermitian_input = 1e-12;       // max |M - M^dagger| allowed for eig_hermitian
    double eig_trace_rel = 1e-9;          // |sum(lambda) - tr M| <= this * ||M||_F
    // kernel invariants
    double kernel_trace = 1e-10;          // |tr T - 1|
    double kernel_hermitian = 1e-10;      // max |T0 - T0^dagger|
    double kernel_psd_floor = -1e-10;     // min eigenvalue of T^(-1)
    double kernel_resolution = 1e-9;      // max |sum T - N Id|
    double kernel_real_residue = 1e-10;   // max |Im E|
    double dual_path = 1e-10;             // agreement between independent computation routes
    // probability grids
    double grid_norm = 1e-10;             // |sum h - 1|
    double norm_check = 1e-8;             // marginals() rejects grids further than this from 1
    double entropy_clamp = 1e-12;         // negatives above this magnitude are rounded to 0
    double negative_mass = 1e-8;          // entries below -this are an error
    // spectra and dynamics
    double mirror_symmetry = 1e-9;        // |E_k + E_{N-1-k}|
    double parity_purity = 1e-10;         // cross-parity weight of an eigenvector
    double conservation = 1e-10;          // trace/hermiticity/purity drift during evolution
};

inline const Tolerances& default_tolerances() {
    static const Tolerances tol{};
    return tol;
}

} // namespace dps
