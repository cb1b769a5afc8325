#pragma once

#include <cmath>
#include <algorithm>
#include <numbers>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "dps/lmg.hpp"
#include "dps/phasespace.hpp"

namespace dps {

struct TimeGrid {
    double t0 = 0.0;
    double t1 = 0.0;
    double dt = 0.05;

    void validate() const {
        if (!(dt > 0.0)) throw InvalidParams("TimeGrid: dt must be > 0");
        if (!(t1 > t0)) throw InvalidParams("TimeGrid: t1 must be > t0");
    }

    std::size_t samples() const {
        validate();
        return static_cast<std::size_t>(std::floor((t1 - t0) / dt + 1e-9)) + 1;
    }

    std::vector<double> times() const {
        std::vector<double> t(samples());
        for (std::size_t k = 0; k < t.size(); ++k) t[k] = t0 + dt * static_cast<double>(k);
        return t;
    }
};

// Closed-system evolution by spectral decomposition: the density operator is
// rotated into the energy eigenbasis once, the off-diagonals pick up phases
// e^{-i (E_j - E_k) tau}, and the result is rotated back. Exact for any tau.
class Propagator {
public:
    Propagator(DensityMatrix rho0, LMGSpectrum spec)
        : spec_(std::move(spec)), n_(static_cast<int>(rho0.dim())) {
        if (n_ != spec_.dim())
            throw DimensionMismatch("Propagator: rho0 and spectrum dimensions differ");
        rho_eigen_ = adjoint(spec_.vectors) * rho0.matrix * spec_.vectors;
    }

    DensityMatrix at(double tau) const {
        ComplexMatrix m(n_);
        for (int j = 0; j < n_; ++j)
            for (int k = 0; k < n_; ++k)
                m(j, k) = rho_eigen_(j, k) *
                          std::polar(1.0, -(spec_.values[j] - spec_.values[k]) * tau);
        ComplexMatrix out = spec_.vectors * m * adjoint(spec_.vectors);
        // re-symmetrize float dust so downstream contracts see an exact
        // Hermitian unit-trace operator
        const int n = n_;
        for (int r = 0; r < n; ++r) {
            out(r, r) = Complex(out(r, r).real(), 0.0);
            for (int c = r + 1; c < n; ++c) {
                const Complex avg = 0.5 * (out(r, c) + std::conj(out(c, r)));
                out(r, c) = avg;
                out(c, r) = std::conj(avg);
            }
        }
        return DensityMatrix{std::move(out)};
    }

private:
    LMGSpectrum spec_;
    int n_;
    ComplexMatrix rho_eigen_;
};

inline DensityMatrix evolve(const DensityMatrix& rho0, const LMGSpectrum& spec, double tau) {
    return Propagator(rho0, spec).at(tau);
}

inline std::vector<RealGrid> husimi_snapshots(const DensityMatrix& rho0, const LMGSpectrum& spec,
                                              const KernelTable& table,
                                              const std::vector<double>& taus) {
    const Propagator prop(rho0, spec);
    std::vector<RealGrid> out;
    out.reserve(taus.size());
    for (double tau : taus) out.push_back(husimi_prob(prop.at(tau), table));
    return out;
}

enum class SeriesKind { eigen_entropy, mutual_correlation, joint_entropy };

inline const char* series_label(SeriesKind k) {
    switch (k) {
        case SeriesKind::eigen_entropy: return "eigen-entropy";
        case SeriesKind::mutual_correlation: return "mutual-correlation";
        case SeriesKind::joint_entropy: return "joint-entropy";
    }
    return "?";
}

struct ScalarSeries {
    SeriesKind kind = SeriesKind::eigen_entropy;
    std::vector<double> taus;
    std::vector<double> values;
};

// One pass over the time grid evaluating several functionals on the same
// Husimi snapshots. Samples are independent, so they may fan out over
// threads; every value lands in its own slot and the result is identical
// for any thread count.
inline std::vector<ScalarSeries> series_multi(const DensityMatrix& rho0, const LMGSpectrum& spec,
                                              const KernelTable& table, const TimeGrid& grid,
                                              const std::vector<SeriesKind>& kinds,
                                              const Tolerances& tol = default_tolerances(),
                                              unsigned threads = 1) {
    grid.validate();
    const Propagator prop(rho0, spec);
    const std::vector<double> taus = grid.times();
    std::vector<ScalarSeries> out(kinds.size());
    for (std::size_t s = 0; s < kinds.size(); ++s) {
        out[s].kind = kinds[s];
        out[s].taus = taus;
        out[s].values.resize(taus.size());
    }
    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            const RealGrid h = husimi_prob(prop.at(taus[k]), table, tol);
            for (std::size_t s = 0; s < kinds.size(); ++s) {
                switch (kinds[s]) {
                    case SeriesKind::eigen_entropy:
                        out[s].values[k] = eigen_entropy(h, tol);
                        break;
                    case SeriesKind::mutual_correlation:
                        out[s].values[k] = mutual_correlation(h, tol);
                        break;
                    case SeriesKind::joint_entropy:
                        out[s].values[k] = joint_entropy(h, tol);
                        break;
                }
            }
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, std::thread::hardware_concurrency()));
    if (threads <= 1 || taus.size() < 2 * threads) {
        worker(0, taus.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (taus.size() + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t b = t * chunk;
            if (b >= taus.size()) break;
            pool.emplace_back(worker, b, std::min(taus.size(), b + chunk));
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

inline ScalarSeries series(const DensityMatrix& rho0, const LMGSpectrum& spec,
                           const KernelTable& table, const TimeGrid& grid, SeriesKind kind,
                           const Tolerances& tol = default_tolerances()) {
    return series_multi(rho0, spec, table, grid, {kind}, tol).front();
}

struct GapEstimate {
    std::string method;
    double delta = 0.0;
    double period = 0.0;
    std::vector<double> peak_times;
    double reference_delta = 0.0;
    double percent_error = 0.0;
};

// Strict local maxima of the sampled series, guarded against floating-point
// plateaus by a 3-sample band: a peak must strictly dominate the band on its
// left and at least tie it on the right with a strict drop somewhere in the
// band, so an exact tie resolves to the earliest time.
inline std::vector<std::size_t> find_peaks(const std::vector<double>& v) {
    std::vector<std::size_t> peaks;
    const std::size_t n = v.size();
    const std::size_t guard = 3;
    if (n < 2 * guard + 1) return peaks;
    for (std::size_t i = guard; i + guard < n; ++i) {
        bool ok = true;
        bool drops_right = false;
        for (std::size_t off = 1; off <= guard && ok; ++off) {
            if (!(v[i] > v[i - off])) ok = false;
            if (v[i] < v[i + off]) ok = false;
            if (v[i] > v[i + off]) drops_right = true;
        }
        if (ok && drops_right) peaks.push_back(i);
    }
    return peaks;
}

// Period from mean spacing of refined peak times; the gap follows from the
// functional's beat structure: a full period 2 pi / Delta for the
// eigen-entropy trace, half of that for the mutual correlation. Only the
// dominant maxima count: the mutual-correlation trace carries low secondary
// bumps between its main peaks, so maxima below the series midrange are
// discarded before the spacing is measured.
inline GapEstimate estimate_gap(const ScalarSeries& s, const LMGSpectrum& spec,
                                const Tolerances& = default_tolerances()) {
    if (s.kind == SeriesKind::joint_entropy)
        throw InvalidParams("estimate_gap: defined for eigen-entropy and mutual-correlation");
    if (s.taus.size() < 8 || s.taus.size() != s.values.size())
        throw TooFewPeaks("estimate_gap: series too short");
    const double ref = spec.gap();
    const double expected_period =
        s.kind == SeriesKind::eigen_entropy ? 2.0 * std::numbers::pi / ref
                                            : std::numbers::pi / ref;
    const double span = s.taus.back() - s.taus.front();
    if (span < 1.5 * expected_period)
        throw TooFewPeaks("estimate_gap: series spans fewer than 1.5 expected periods");

    auto peaks = find_peaks(s.values);
    const auto [vmin_it, vmax_it] = std::minmax_element(s.values.begin(), s.values.end());
    const double midrange = 0.5 * (*vmin_it + *vmax_it);
    std::erase_if(peaks, [&](std::size_t i) { return s.values[i] < midrange; });
    if (peaks.size() < 2) throw TooFewPeaks("estimate_gap: fewer than 2 dominant maxima found");

    GapEstimate g;
    g.method = series_label(s.kind);
    g.reference_delta = ref;
    for (std::size_t i : peaks) {
        const double ym = s.values[i - 1], y0 = s.values[i], yp = s.values[i + 1];
        const double denom = ym - 2.0 * y0 + yp;
        double shift = 0.0;
        if (std::abs(denom) > 1e-300) shift = 0.5 * (ym - yp) / denom;
        const double dt = s.taus[1] - s.taus[0];
        g.peak_times.push_back(s.taus[i] + shift * dt);
    }
    double acc = 0.0;
    for (std::size_t i = 1; i < g.peak_times.size(); ++i)
        acc += g.peak_times[i] - g.peak_times[i - 1];
    g.period = acc / static_cast<double>(g.peak_times.size() - 1);
    g.delta = (s.kind == SeriesKind::eigen_entropy ? 2.0 : 1.0) * std::numbers::pi / g.period;
    g.percent_error = 100.0 * std::abs(g.delta - ref) / ref;
    return g;
}

} // namespace dps
