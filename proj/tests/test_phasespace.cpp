#include <catch2/catch_amalgamated.hpp>

#include <limits>

#include "dps/lmg.hpp"
#include "dps/phasespace.hpp"
#include "dps/random.hpp"
#include "oracles.hpp"

using namespace dps;

namespace {

DensityMatrix maximally_mixed(int n) {
    ComplexMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0 / n;
    return DensityMatrix::checked(std::move(m));
}

DensityMatrix basis_state(int n, int index) {
    ComplexMatrix m(n);
    m(index, index) = 1.0;
    return DensityMatrix::checked(std::move(m));
}

} // namespace

TEST_CASE("density matrix contracts") {
    CHECK_THROWS_AS(DensityMatrix::checked(ComplexMatrix::identity(3)), NotNormalized);
    ComplexMatrix bad(2);
    bad(0, 0) = 1.0;
    bad(0, 1) = Complex(0.0, 0.3);
    bad(1, 0) = Complex(0.0, 0.3);  // anti-Hermitian off-diagonal
    CHECK_THROWS_AS(DensityMatrix::checked(std::move(bad)), NotHermitian);

    Rng rng(1);
    const auto rho = random_density(6, rng);
    CHECK(std::abs(trace(rho.matrix) - Complex(1.0, 0.0)) < 1e-14);
    CHECK(rho.min_eigenvalue() >= -1e-12);
}

TEST_CASE("characteristic function of the maximally mixed state is a delta") {
    const int n = 3;
    const auto table = build_kernel_table(n);
    const auto xi = characteristic_function(maximally_mixed(n), 0.0, table);
    for (int eta = -1; eta <= 1; ++eta)
        for (int x = -1; x <= 1; ++x) {
            const Complex expect =
                (eta == 0 && x == 0) ? Complex(1.0 / std::sqrt(3.0), 0.0) : Complex{};
            CHECK(std::abs(xi.at(eta, x) - expect) < 1e-13);
        }
}

TEST_CASE("characteristic function normalization point for any state") {
    const int n = 5;
    const auto table = build_kernel_table(n);
    Rng rng(2);
    for (int rep = 0; rep < 5; ++rep) {
        const auto rho = random_density(n, rng);
        for (double s : {-1.0, 0.0, 1.0}) {
            const auto xi = characteristic_function(rho, s, table);
            CHECK(std::abs(xi.at(0, 0) - Complex(1.0 / std::sqrt(5.0), 0.0)) < 1e-13);
        }
    }
}

TEST_CASE("characteristic function of |m=0> along xi=0") {
    const int n = 3;
    const auto table = build_kernel_table(n);
    const auto rho = basis_state(n, 1);  // label m=0 sits at row l=1
    const auto xi = characteristic_function(rho, 0.0, table);
    for (int eta = -1; eta <= 1; ++eta)
        CHECK(std::abs(xi.at(eta, 0) - Complex(1.0 / std::sqrt(3.0), 0.0)) < 1e-13);
}

TEST_CASE("quasiprob of the maximally mixed state is flat 1/N") {
    const int n = 5;
    const auto table = build_kernel_table(n);
    for (double s : {-1.0, 0.0, 1.0}) {
        const auto f = quasiprob(maximally_mixed(n), s, table);
        for (double v : f.values) CHECK(v == Catch::Approx(1.0 / n).margin(1e-12));
    }
}

TEST_CASE("quasiprob sums to N and the two routes agree") {
    const int n = 5;
    const auto table = build_kernel_table(n);
    Rng rng(3);
    for (int rep = 0; rep < 10; ++rep) {
        const auto rho = random_density(n, rng);
        for (double s : {-1.0, 0.0, 1.0}) {
            const auto f = quasiprob(rho, s, table);
            CHECK(f.sum() == Catch::Approx(double(n)).margin(1e-9));
            CHECK(f.imag_residue < 1e-10);
            const auto g = quasiprob_via_characteristic(rho, s, table);
            for (std::size_t i = 0; i < f.values.size(); ++i)
                CHECK(std::abs(f.values[i] - g.values[i]) < 1e-10);
        }
    }
}

TEST_CASE("husimi values of pure states stay in [0,1]") {
    const int n = 5;
    const auto table = build_kernel_table(n);
    Rng rng(4);
    for (int rep = 0; rep < 10; ++rep) {
        const auto rho = random_pure_density(n, rng);
        const auto f = quasiprob(rho, -1.0, table);
        for (double v : f.values) {
            CHECK(v >= -1e-10);
            CHECK(v <= 1.0 + 1e-10);
        }
    }
}

TEST_CASE("husimi probability grid: uniform state, normalization, smoothing route") {
    const int n = 5;
    const auto table = build_kernel_table(n);
    const auto ek = smoothing_kernel(table);

    const auto h0 = husimi_prob(maximally_mixed(n), table);
    for (double v : h0.values) CHECK(v == Catch::Approx(1.0 / (n * n)).margin(1e-13));

    Rng rng(5);
    for (int rep = 0; rep < 10; ++rep) {
        const auto rho = random_density(n, rng);
        const auto h = husimi_prob(rho, table);
        CHECK(h.sum() == Catch::Approx(1.0).margin(1e-10));
        for (double v : h.values) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        const auto hs = husimi_via_smoothing(rho, table, ek);
        for (std::size_t i = 0; i < h.values.size(); ++i)
            CHECK(std::abs(h.values[i] - hs.values[i]) < 1e-10);
    }
}

TEST_CASE("marginals") {
    const int n = 5;
    RealGrid uniform{n, std::vector<double>(25, 1.0 / 25.0), 0.0};
    const auto mu = marginals(uniform);
    for (double q : mu.q) CHECK(q == Catch::Approx(0.2).margin(1e-14));
    for (double r : mu.r) CHECK(r == Catch::Approx(0.2).margin(1e-14));

    RealGrid delta{n, std::vector<double>(25, 0.0), 0.0};
    delta.at(1, -2) = 1.0;
    const auto md = marginals(delta);
    for (int m = -2; m <= 2; ++m) {
        CHECK(md.q[m + 2] == (m == 1 ? 1.0 : 0.0));
        CHECK(md.r[m + 2] == (m == -2 ? 1.0 : 0.0));
    }

    RealGrid bad{n, std::vector<double>(25, 1.0), 0.0};
    CHECK_THROWS_AS(marginals(bad), NotNormalized);

    const auto table = build_kernel_table(n);
    Rng rng(6);
    const auto h = husimi_prob(random_density(n, rng), table);
    const auto m = marginals(h);
    double sq = 0.0, sr = 0.0;
    for (double v : m.q) sq += v;
    for (double v : m.r) sr += v;
    CHECK(sq == Catch::Approx(1.0).margin(1e-10));
    CHECK(sr == Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("shannon entropy") {
    std::vector<double> delta{1.0, 0.0, 0.0};
    CHECK(shannon_entropy(delta) == 0.0);

    const int n = 7;
    std::vector<double> uniform(n * n, 1.0 / (n * n));
    CHECK(shannon_entropy(uniform) == Catch::Approx(2.0 * std::log(n)).margin(1e-12));

    std::vector<double> uniform_n(n, 1.0 / n);
    CHECK(shannon_entropy(uniform_n) == Catch::Approx(std::log(n)).margin(1e-13));

    std::vector<double> noisy{0.5, 0.5, -1e-13};  // float dust is clamped
    CHECK(shannon_entropy(noisy) == Catch::Approx(std::log(2.0)).margin(1e-12));

    std::vector<double> negative{0.5, 0.5, -1e-6};
    CHECK_THROWS_AS(shannon_entropy(negative), NegativeMass);
}

TEST_CASE("husimi split and eigen-entropy: uniform grid is rank one") {
    const int n = 5;
    RealGrid uniform{n, std::vector<double>(25, 1.0 / 25.0), 0.0};
    const auto [split, entropy] = husimi_split_and_eigenentropy(uniform);
    CHECK(entropy == Catch::Approx(std::log(n) / n).margin(1e-12));
    // lambda = {1/N, 0, ..., 0}
    double largest = 0.0;
    for (const auto& l : split.lambda) largest = std::max(largest, std::abs(l));
    CHECK(largest == Catch::Approx(1.0 / n).margin(1e-12));
}

TEST_CASE("husimi split invariants on random grids") {
    Rng rng(7);
    const int n = 7;
    for (int rep = 0; rep < 5; ++rep) {
        RealGrid g{n, std::vector<double>(n * n), 0.0};
        double sum = 0.0;
        for (double& v : g.values) {
            v = rng.uniform();
            sum += v;
        }
        for (double& v : g.values) v /= sum;

        const auto [split, entropy] = husimi_split_and_eigenentropy(g);
        CHECK(entropy >= 0.0);

        // A + B reassembles the grid to machine precision
        const auto m = grid_as_matrix(g);
        CHECK(max_abs(split.a + split.b - m) <=
              std::numeric_limits<double>::epsilon() * std::max(1.0, max_abs(m)));

        // trace identity: sum lambda = tr h = sum sigma_a
        Complex sum_lambda{};
        for (const auto& l : split.lambda) sum_lambda += l;
        double sum_sigma_a = 0.0;
        for (double v : split.sigma_a) sum_sigma_a += v;
        CHECK(std::abs(sum_lambda - trace(m)) < 1e-9);
        CHECK(std::abs(sum_sigma_a - trace(m).real()) < 1e-9);

        // sigma_b pure imaginary
        for (const auto& v : split.sigma_b) CHECK(std::abs(v.real()) < 1e-10);
    }
}

TEST_CASE("symmetric grid has real eigenvalues and vanishing B") {
    const int n = 5;
    Rng rng(8);
    RealGrid g{n, std::vector<double>(25), 0.0};
    for (int r = 0; r < n; ++r)
        for (int c = r; c < n; ++c) {
            const double v = rng.uniform();
            g.values[r * n + c] = v;
            g.values[c * n + r] = v;
        }
    double total = 0.0;
    for (double v : g.values) total += v;
    for (double& v : g.values) v /= total;
    const auto [split, entropy] = husimi_split_and_eigenentropy(g);
    CHECK(max_abs(split.b) == 0.0);  // symmetric input: the residual split is exactly zero
    for (const auto& l : split.lambda) CHECK(std::abs(l.imag()) < 1e-9);
    CHECK(entropy >= 0.0);
}

TEST_CASE("eigen-entropy of the LMG initial state: cross-solver oracle") {
    const auto spec = spectrum(LMGParams{20, 1.5});
    const auto table = build_kernel_table(21);
    const auto rho0 = initial_state(spec, 0, 1, 0.0);
    const auto h = husimi_prob(rho0, table);

    const double ours = eigen_entropy(h);

    // independent route: Eigen's general solver on the same matrix
    const auto lam = oracle::eigen_general_values(grid_as_matrix(h));
    double ref = 0.0;
    for (const auto& l : lam) {
        const double m = std::abs(l);
        if (m > 0.0) ref -= m * std::log(m);
    }
    CHECK(ours == Catch::Approx(ref).margin(1e-8));
}

TEST_CASE("mutual correlation analytic cases") {
    const int n = 5;

    // product grid: I = 0
    Rng rng(9);
    std::vector<double> q(n), r(n);
    double sq = 0.0, sr = 0.0;
    for (int i = 0; i < n; ++i) {
        q[i] = rng.uniform() + 0.1;
        r[i] = rng.uniform() + 0.1;
        sq += q[i];
        sr += r[i];
    }
    RealGrid prod{n, std::vector<double>(n * n), 0.0};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) prod.values[i * n + j] = (q[i] / sq) * (r[j] / sr);
    CHECK(mutual_correlation(prod) == Catch::Approx(0.0).margin(1e-12));

    // single cell: all three entropies vanish
    RealGrid delta{n, std::vector<double>(n * n, 0.0), 0.0};
    delta.at(0, 0) = 1.0;
    CHECK(mutual_correlation(delta) == Catch::Approx(0.0).margin(1e-15));

    // two cells on distinct rows and columns: I = ln 2
    RealGrid two{n, std::vector<double>(n * n, 0.0), 0.0};
    two.at(-1, -2) = 0.5;
    two.at(1, 2) = 0.5;
    CHECK(mutual_correlation(two) == Catch::Approx(std::log(2.0)).margin(1e-12));
}

TEST_CASE("mutual correlation nonnegative on random states (property)") {
    Rng rng(10);
    for (int n : {3, 5, 7}) {
        const auto table = build_kernel_table(n);
        for (int rep = 0; rep < 30; ++rep) {
            const auto h = husimi_prob(random_density(n, rng), table);
            const double mi = mutual_correlation(h);
            CHECK(mi >= -1e-10);
            // same statement as entropy subadditivity
            const auto m = marginals(h);
            CHECK(joint_entropy(h) <= shannon_entropy(m.q) + shannon_entropy(m.r) + 1e-10);
        }
    }
}
