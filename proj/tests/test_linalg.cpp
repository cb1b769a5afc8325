#include <catch2/catch_amalgamated.hpp>

#include "dps/linalg.hpp"
#include "dps/random.hpp"
#include "oracles.hpp"

using namespace dps;

TEST_CASE("matrix ops basics") {
    const auto id = ComplexMatrix::identity(4);
    CHECK(trace(id) == Complex(4.0, 0.0));

    Rng rng(11);
    const auto a = random_matrix(5, rng);
    CHECK(std::abs(trace_product(a, ComplexMatrix::identity(5)) - trace(a)) < 1e-14);

    // adjoint is an involution
    const auto aa = adjoint(adjoint(a));
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) CHECK(aa(i, j) == a(i, j));

    CHECK_THROWS_AS(a * ComplexMatrix::identity(4), DimensionMismatch);
    CHECK_THROWS_AS(trace_product(a, ComplexMatrix::identity(3)), DimensionMismatch);
}

TEST_CASE("multiply associativity on random triples") {
    Rng rng(12);
    for (int rep = 0; rep < 5; ++rep) {
        const auto a = random_matrix(6, rng);
        const auto b = random_matrix(6, rng);
        const auto c = random_matrix(6, rng);
        const auto left = (a * b) * c;
        const auto right = a * (b * c);
        double scale = std::max(1.0, max_abs(left));
        CHECK(max_abs(left - right) / scale < 1e-12);
    }
}

TEST_CASE("eig_hermitian on diagonal and 2x2 analytic") {
    const auto d = eig_hermitian(ComplexMatrix::diagonal({{-1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}}));
    CHECK(d.values[0].real() == Catch::Approx(-1.0).margin(1e-14));
    CHECK(d.values[1].real() == Catch::Approx(0.0).margin(1e-14));
    CHECK(d.values[2].real() == Catch::Approx(1.0).margin(1e-14));
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i)
            CHECK(std::abs(d.vectors(i, j)) == Catch::Approx(i == j ? 1.0 : 0.0).margin(1e-14));

    ComplexMatrix flip(2);
    flip(0, 1) = 1.0;
    flip(1, 0) = 1.0;
    const auto f = eig_hermitian(flip);
    CHECK(f.values[0].real() == Catch::Approx(-1.0).margin(1e-14));
    CHECK(f.values[1].real() == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("eig_hermitian residual and orthonormality on random 21x21") {
    Rng rng(21);
    const auto h = random_hermitian(21, rng);
    const auto d = eig_hermitian(h);
    CHECK(d.residual <= 1e-10 * frobenius_norm(h));

    // reconstruction ||M - V L V^dagger||_F <= 1e-9 ||M||_F
    ComplexMatrix lam(21);
    for (int i = 0; i < 21; ++i) lam(i, i) = d.values[i];
    const auto rec = d.vectors * lam * adjoint(d.vectors) - h;
    CHECK(frobenius_norm(rec) <= 1e-9 * frobenius_norm(h));

    // columns orthonormal
    const auto gram = adjoint(d.vectors) * d.vectors - ComplexMatrix::identity(21);
    CHECK(max_abs(gram) < 1e-10);

    // eigenvalues real and ascending
    for (int i = 0; i < 21; ++i) CHECK(std::abs(d.values[i].imag()) < 1e-12);
    for (int i = 1; i < 21; ++i) CHECK(d.values[i - 1].real() <= d.values[i].real());

    // against the independent solver
    const auto ref = oracle::eigen_hermitian_values(h);
    for (int i = 0; i < 21; ++i)
        CHECK(d.values[i].real() == Catch::Approx(ref[i]).margin(1e-9));
}

TEST_CASE("eig_hermitian 5x5 characteristic polynomial sign changes") {
    Rng rng(5);
    const auto h = random_hermitian(5, rng);
    const auto d = eig_hermitian(h);
    // between consecutive eigenvalues the characteristic polynomial must
    // change sign (simple roots, which random matrices give almost surely)
    std::vector<double> probes;
    probes.push_back(d.values.front().real() - 1.0);
    for (int i = 0; i + 1 < 5; ++i)
        probes.push_back(0.5 * (d.values[i].real() + d.values[i + 1].real()));
    probes.push_back(d.values.back().real() + 1.0);
    for (std::size_t k = 0; k + 1 < probes.size(); ++k) {
        const double a = oracle::charpoly(h, probes[k]);
        const double b = oracle::charpoly(h, probes[k + 1]);
        CHECK(a * b < 0.0);
    }
}

TEST_CASE("eig_hermitian rejects non-hermitian input") {
    ComplexMatrix m(2);
    m(0, 1) = 1.0;  // strictly upper
    CHECK_THROWS_AS(eig_hermitian(m), NotHermitian);
}

TEST_CASE("eig_general on diagonal and rotation generator") {
    const auto d = eig_general(ComplexMatrix::diagonal({{2.0, 0.0}, {0.0, 3.0}}));
    // sorted by (re, im): 0+3i before 2+0i
    CHECK(std::abs(d.values[0] - Complex(0.0, 3.0)) < 1e-12);
    CHECK(std::abs(d.values[1] - Complex(2.0, 0.0)) < 1e-12);

    ComplexMatrix rot(2);
    rot(0, 1) = 1.0;
    rot(1, 0) = -1.0;
    const auto r = eig_general(rot);
    CHECK(std::abs(r.values[0] - Complex(0.0, -1.0)) < 1e-12);
    CHECK(std::abs(r.values[1] - Complex(0.0, 1.0)) < 1e-12);
}

TEST_CASE("eig_general random real 7x7: conjugate pairs and trace") {
    Rng rng(7);
    ComplexMatrix a(7);
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) a(i, j) = Complex(rng.normal(), 0.0);
    const auto d = eig_general(a);

    Complex sum{};
    for (const auto& v : d.values) sum += v;
    CHECK(std::abs(sum - trace(a)) <= 1e-9 * frobenius_norm(a));

    // eigenvalue multiset closed under conjugation
    std::vector<bool> used(7, false);
    for (const auto& v : d.values) {
        double best = 1e300;
        std::size_t pick = 0;
        for (std::size_t j = 0; j < d.values.size(); ++j) {
            if (used[j]) continue;
            const double dist = std::abs(std::conj(v) - d.values[j]);
            if (dist < best) {
                best = dist;
                pick = j;
            }
        }
        used[pick] = true;
        CHECK(best < 1e-8);
    }
}

TEST_CASE("eig_general determinant against cofactor oracle") {
    Rng rng(31);
    for (std::size_t n : {2u, 3u, 4u, 5u}) {
        const auto a = random_matrix(n, rng);
        const auto d = eig_general(a);
        Complex prod{1.0, 0.0};
        for (const auto& v : d.values) prod *= v;
        const Complex ref = oracle::det_cofactor(a);
        CHECK(std::abs(prod - ref) < 1e-9 * std::max(1.0, std::abs(ref)));
    }
}

TEST_CASE("eig_general residual and eigen cross-check on random complex") {
    Rng rng(99);
    const auto a = random_matrix(13, rng);
    const auto d = eig_general(a);
    CHECK(d.residual <= 1e-9 * frobenius_norm(a));
    const auto ref = oracle::eigen_general_values(a);
    for (std::size_t i = 0; i < d.values.size(); ++i)
        CHECK(std::abs(d.values[i] - ref[i]) < 1e-8);
}

TEST_CASE("eig_general deterministic ordering") {
    Rng rng(3);
    const auto a = random_matrix(9, rng);
    const auto d1 = eig_general(a);
    const auto d2 = eig_general(a);
    for (std::size_t i = 0; i < d1.values.size(); ++i) CHECK(d1.values[i] == d2.values[i]);
    for (std::size_t i = 1; i < d1.values.size(); ++i) {
        const bool ordered = d1.values[i - 1].real() < d1.values[i].real() ||
                             (d1.values[i - 1].real() == d1.values[i].real() &&
                              d1.values[i - 1].imag() <= d1.values[i].imag());
        CHECK(ordered);
    }
}
