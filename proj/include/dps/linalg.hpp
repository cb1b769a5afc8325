#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "dps/config.hpp"
#include "dps/errors.hpp"

namespace dps {

using Complex = std::complex<double>;

// Dense square complex matrix, row-major. Values are immutable in spirit:
// operations return new matrices instead of mutating shared state.
class ComplexMatrix {
public:
    ComplexMatrix() = default;

    explicit ComplexMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {
        if (dim == 0) throw InvalidParams("ComplexMatrix: dim must be >= 1");
    }

    ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
        : dim_(dim), entries_(std::move(entries)) {
        if (dim == 0) throw InvalidParams("ComplexMatrix: dim must be >= 1");
        if (entries_.size() != dim * dim)
            throw DimensionMismatch("ComplexMatrix: entries size != dim^2");
    }

    static ComplexMatrix identity(std::size_t dim) {
        ComplexMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix diagonal(const std::vector<Complex>& d) {
        ComplexMatrix m(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t dim() const { return dim_; }

    Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * dim_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return entries_[r * dim_ + c]; }

    const std::vector<Complex>& entries() const { return entries_; }
    std::vector<Complex>& entries() { return entries_; }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        require_same_dim(o, "operator+=");
        for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += o.entries_[i];
        return *this;
    }

    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        require_same_dim(o, "operator-=");
        for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= o.entries_[i];
        return *this;
    }

    ComplexMatrix& operator*=(Complex z) {
        for (auto& e : entries_) e *= z;
        return *this;
    }

private:
    void require_same_dim(const ComplexMatrix& o, const char* op) const {
        if (dim_ != o.dim_)
            throw DimensionMismatch(std::string("ComplexMatrix::") + op + ": dimension mismatch");
    }

    std::size_t dim_ = 0;
    std::vector<Complex> entries_;
};

inline ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
inline ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
inline ComplexMatrix operator*(Complex z, ComplexMatrix a) { return a *= z; }
inline ComplexMatrix operator*(ComplexMatrix a, Complex z) { return a *= z; }

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("multiply: dimension mismatch");
    const std::size_t n = a.dim();
    ComplexMatrix c(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

inline ComplexMatrix adjoint(const ComplexMatrix& a) {
    const std::size_t n = a.dim();
    ComplexMatrix c(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) c(j, i) = std::conj(a(i, j));
    return c;
}

inline ComplexMatrix transpose(const ComplexMatrix& a) {
    const std::size_t n = a.dim();
    ComplexMatrix c(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) c(j, i) = a(i, j);
    return c;
}

inline Complex trace(const ComplexMatrix& a) {
    Complex t{};
    for (std::size_t i = 0; i < a.dim(); ++i) t += a(i, i);
    return t;
}

// tr(A B) without forming the product.
inline Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("trace_product: dimension mismatch");
    const std::size_t n = a.dim();
    Complex t{};
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) t += a(j, k) * b(k, j);
    return t;
}

inline double frobenius_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (const auto& e : a.entries()) s += std::norm(e);
    return std::sqrt(s);
}

inline double max_abs(const ComplexMatrix& a) {
    double m = 0.0;
    for (const auto& e : a.entries()) m = std::max(m, std::abs(e));
    return m;
}

// max |A - A^dagger| over all entries.
inline double hermitian_deviation(const ComplexMatrix& a) {
    const std::size_t n = a.dim();
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
    return m;
}

inline bool all_finite(const ComplexMatrix& a) {
    for (const auto& e : a.entries())
        if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) return false;
    return true;
}

struct EigenDecomposition {
    std::vector<Complex> values;  // N eigenvalues
    ComplexMatrix vectors;        // unit-norm eigenvectors as columns
    double residual = 0.0;        // max_i ||M v_i - lambda_i v_i||_2
};

namespace detail {

inline void require_finite_square(const ComplexMatrix& m, const char* who) {
    if (m.dim() == 0) throw InvalidParams(std::string(who) + ": empty matrix");
    if (!all_finite(m)) throw InvalidParams(std::string(who) + ": non-finite entries");
}

// Rotate column phases so the largest-magnitude entry of each eigenvector is
// real and positive. Output is then independent of the solver's internal
// phase choices.
inline void normalize_vector_phases(ComplexMatrix& v) {
    const std::size_t n = v.dim();
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t imax = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double m = std::abs(v(i, j));
            if (m > best + 1e-14) {  // small slack keeps ties deterministic
                best = m;
                imax = i;
            }
        }
        const Complex pivot = v(imax, j);
        if (std::abs(pivot) == 0.0) continue;
        const Complex phase = std::conj(pivot) / std::abs(pivot);
        for (std::size_t i = 0; i < n; ++i) v(i, j) *= phase;
    }
}

inline double eig_residual(const ComplexMatrix& m, const EigenDecomposition& d) {
    const std::size_t n = m.dim();
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            Complex r = -d.values[j] * d.vectors(i, j);
            for (std::size_t k = 0; k < n; ++k) r += m(i, k) * d.vectors(k, j);
            s += std::norm(r);
        }
        worst = std::max(worst, std::sqrt(s));
    }
    return worst;
}

} // namespace detail

// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
// Eigenvalues come back sorted ascending with orthonormal eigenvectors.
inline EigenDecomposition eig_hermitian(const ComplexMatrix& m,
                                        const Tolerances& tol = default_tolerances()) {
    detail::require_finite_square(m, "eig_hermitian");
    const std::size_t n = m.dim();
    const double fro = frobenius_norm(m);
    if (hermitian_deviation(m) > tol.hermitian_input * std::max(1.0, fro))
        throw NotHermitian("eig_hermitian: input is not Hermitian within tolerance");

    ComplexMatrix a = m;
    ComplexMatrix v = ComplexMatrix::identity(n);

    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) s += 2.0 * std::norm(a(p, q));
        return std::sqrt(s);
    };

    const double stop = 1e-14 * std::max(fro, 1e-300);
    const int max_sweeps = 60;
    int sweep = 0;
    while (off_norm() > stop) {
        if (++sweep > max_sweeps)
            throw NoConvergence("eig_hermitian: Jacobi sweeps exceeded");
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex beta = a(p, q);
                const double ab = std::abs(beta);
                if (ab < 1e-300) continue;
                const Complex phase = beta / ab;  // e^{i phi}
                const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * ab);
                const double sign = theta >= 0.0 ? 1.0 : -1.0;
                const double t = sign / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // columns p,q of A and of V (right-multiply by the rotation)
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * std::conj(phase) * akq;
                    a(k, q) = s * phase * akp + c * akq;
                    const Complex vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * std::conj(phase) * vkq;
                    v(k, q) = s * phase * vkp + c * vkq;
                }
                // rows p,q of A (left-multiply by the adjoint rotation)
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * phase * aqk;
                    a(q, k) = s * std::conj(phase) * apk + c * aqk;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    EigenDecomposition d;
    d.values.resize(n);
    d.vectors = ComplexMatrix(n);
    for (std::size_t j = 0; j < n; ++j) {
        d.values[j] = a(order[j], order[j]).real();
        for (std::size_t i = 0; i < n; ++i) d.vectors(i, j) = v(i, order[j]);
    }
    detail::normalize_vector_phases(d.vectors);
    d.residual = detail::eig_residual(m, d);
    if (d.residual > tol.eig_residual_rel * std::max(fro, 1e-300))
        throw NoConvergence("eig_hermitian: residual above contract");
    return d;
}

// Eigendecomposition of a general complex matrix: unitary Hessenberg
// reduction followed by explicit shifted QR, eigenvectors by triangular
// back-substitution on the Schur form. Eigenvalues are sorted by
// (real part, imaginary part) so repeated runs produce identical output.
inline EigenDecomposition eig_general(const ComplexMatrix& m,
                                      const Tolerances& tol = default_tolerances()) {
    detail::require_finite_square(m, "eig_general");
    const std::size_t n = m.dim();
    const double fro = frobenius_norm(m);

    ComplexMatrix h = m;
    ComplexMatrix z = ComplexMatrix::identity(n);

    // Householder reduction to upper Hessenberg, accumulating Z.
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double xnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) xnorm2 += std::norm(h(i, k));
        const double xnorm = std::sqrt(xnorm2);
        if (xnorm < 1e-300) continue;
        const Complex x0 = h(k + 1, k);
        const Complex phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex{1.0, 0.0};
        const Complex alpha = -phase * xnorm;
        std::vector<Complex> w(n, Complex{});
        for (std::size_t i = k + 1; i < n; ++i) w[i] = h(i, k);
        w[k + 1] -= alpha;
        double wnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) wnorm2 += std::norm(w[i]);
        if (wnorm2 < 1e-300) continue;
        const double tau = 2.0 / wnorm2;
        // H <- P H
        for (std::size_t j = k; j < n; ++j) {
            Complex dot{};
            for (std::size_t i = k + 1; i < n; ++i) dot += std::conj(w[i]) * h(i, j);
            dot *= tau;
            for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= dot * w[i];
        }
        // H <- H P
        for (std::size_t i = 0; i < n; ++i) {
            Complex dot{};
            for (std::size_t j = k + 1; j < n; ++j) dot += h(i, j) * w[j];
            dot *= tau;
            for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= dot * std::conj(w[j]);
        }
        // Z <- Z P
        for (std::size_t i = 0; i < n; ++i) {
            Complex dot{};
            for (std::size_t j = k + 1; j < n; ++j) dot += z(i, j) * w[j];
            dot *= tau;
            for (std::size_t j = k + 1; j < n; ++j) z(i, j) -= dot * std::conj(w[j]);
        }
        for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
        h(k + 1, k) = alpha;
    }

    // Shifted QR on the Hessenberg matrix.
    const double eps = 2.22e-16;
    auto subdiag_negligible = [&](std::size_t i) {
        const double scale = std::abs(h(i - 1, i - 1)) + std::abs(h(i, i));
        return std::abs(h(i, i - 1)) <= eps * std::max(scale, fro * eps + 1e-300);
    };

    std::size_t hi = n - 1;
    std::size_t iter_at_hi = 0;
    std::size_t total_iter = 0;
    const std::size_t max_total = 60 * n + 100;

    while (true) {
        // deflate converged rows
        while (hi > 0 && subdiag_negligible(hi)) {
            h(hi, hi - 1) = 0.0;
            --hi;
            iter_at_hi = 0;
        }
        if (hi == 0) break;
        std::size_t lo = hi;
        while (lo > 0 && !subdiag_negligible(lo)) --lo;
        if (lo > 0) h(lo, lo - 1) = 0.0;

        if (++total_iter > max_total)
            throw NoConvergence("eig_general: QR iterations exceeded");
        ++iter_at_hi;

        // Wilkinson shift from the trailing 2x2 block, with an occasional
        // exceptional shift to break rare cycles.
        Complex sigma;
        if (iter_at_hi % 12 == 0) {
            sigma = Complex(std::abs(h(hi, hi - 1).real()) + std::abs(h(hi, hi - 1).imag()) +
                                std::abs(h(hi, hi).real()),
                            0.0);
        } else {
            const Complex a = h(hi - 1, hi - 1), b = h(hi - 1, hi);
            const Complex c = h(hi, hi - 1), d = h(hi, hi);
            const Complex tr2 = 0.5 * (a + d);
            const Complex disc = std::sqrt(tr2 * tr2 - (a * d - b * c));
            const Complex l1 = tr2 + disc, l2 = tr2 - disc;
            sigma = std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;
        }

        for (std::size_t i = lo; i <= hi; ++i) h(i, i) -= sigma;

        // QR factorization of the active block by Givens rotations,
        // immediately followed by the RQ recombination (similarity).
        std::vector<Complex> gc(hi), gs(hi);
        for (std::size_t i = lo; i < hi; ++i) {
            const Complex a = h(i, i), b = h(i + 1, i);
            const double r = std::sqrt(std::norm(a) + std::norm(b));
            if (r < 1e-300) {
                gc[i] = 1.0;
                gs[i] = 0.0;
                continue;
            }
            gc[i] = std::conj(a) / r;
            gs[i] = std::conj(b) / r;
            for (std::size_t j = i; j < n; ++j) {
                const Complex hij = h(i, j), hij1 = h(i + 1, j);
                h(i, j) = gc[i] * hij + gs[i] * hij1;
                h(i + 1, j) = -std::conj(gs[i]) * hij + std::conj(gc[i]) * hij1;
            }
        }
        for (std::size_t i = lo; i < hi; ++i) {
            const std::size_t rmax = std::min(i + 2, hi);
            for (std::size_t r = 0; r <= rmax; ++r) {
                const Complex hri = h(r, i), hri1 = h(r, i + 1);
                h(r, i) = hri * std::conj(gc[i]) + hri1 * std::conj(gs[i]);
                h(r, i + 1) = -hri * gs[i] + hri1 * gc[i];
            }
            for (std::size_t r = 0; r < n; ++r) {
                const Complex zri = z(r, i), zri1 = z(r, i + 1);
                z(r, i) = zri * std::conj(gc[i]) + zri1 * std::conj(gs[i]);
                z(r, i + 1) = -zri * gs[i] + zri1 * gc[i];
            }
        }

        for (std::size_t i = lo; i <= hi; ++i) h(i, i) += sigma;
    }

    // Eigenvectors of the triangular Schur factor, lifted back through Z.
    const double tnorm = std::max(frobenius_norm(h), 1e-300);
    EigenDecomposition d;
    d.values.resize(n);
    d.vectors = ComplexMatrix(n);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        const Complex a = h(i, i), b = h(j, j);
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });

    std::vector<Complex> y(n);
    for (std::size_t col = 0; col < n; ++col) {
        const std::size_t j = order[col];
        const Complex lambda = h(j, j);
        std::fill(y.begin(), y.end(), Complex{});
        y[j] = 1.0;
        for (std::size_t ii = j; ii-- > 0;) {
            Complex rhs{};
            for (std::size_t k = ii + 1; k <= j; ++k) rhs += h(ii, k) * y[k];
            Complex div = h(ii, ii) - lambda;
            if (std::abs(div) < eps * tnorm) div = eps * tnorm;
            y[ii] = -rhs / div;
        }
        double nrm2 = 0.0;
        std::vector<Complex> x(n, Complex{});
        for (std::size_t r = 0; r < n; ++r) {
            Complex acc{};
            for (std::size_t k = 0; k <= j; ++k) acc += z(r, k) * y[k];
            x[r] = acc;
            nrm2 += std::norm(acc);
        }
        const double nrm = std::sqrt(nrm2);
        d.values[col] = lambda;
        for (std::size_t r = 0; r < n; ++r) d.vectors(r, col) = x[r] / nrm;
    }
    detail::normalize_vector_phases(d.vectors);

    Complex sum{};
    for (const auto& v : d.values) sum += v;
    if (std::abs(sum - trace(m)) > tol.eig_trace_rel * std::max(fro, 1e-300))
        throw NoConvergence("eig_general: eigenvalue sum deviates from trace");
    d.residual = detail::eig_residual(m, d);
    return d;
}

} // namespace dps
