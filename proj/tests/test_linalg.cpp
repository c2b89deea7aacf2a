#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "pptbound/linalg.hpp"
#include "pptbound/rng.hpp"
#include "test_support.hpp"

using namespace pptbound;
using namespace pptbound::testing;

namespace {

ComplexMatrix diag2(double a, double b) {
    ComplexMatrix m(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

ComplexMatrix reconstruct(const HermEigResult& eig) {
    const std::size_t n = eig.eigenvalues.size();
    ComplexMatrix lambda(n, n);
    for (std::size_t i = 0; i < n; ++i) lambda(i, i) = eig.eigenvalues[i];
    return eig.eigenvectors * lambda * dagger(eig.eigenvectors);
}

} // namespace

TEST_SUITE("linalg") {

TEST_CASE("herm_eig on identity and diagonal matrices") {
    const auto id = herm_eig(ComplexMatrix::identity(2));
    CHECK(id.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(id.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));

    const auto dg = herm_eig(diag2(3.0, -1.0));
    CHECK(dg.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(dg.eigenvalues[1] == doctest::Approx(3.0).epsilon(1e-12));
    // eigenvectors are the permuted identity
    CHECK(std::abs(dg.eigenvectors(1, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(dg.eigenvectors(0, 1)) == doctest::Approx(1.0));
    CHECK(std::abs(dg.eigenvectors(0, 0)) == doctest::Approx(0.0));
}

TEST_CASE("herm_eig matches the hand eigendecomposition of sigma_x") {
    // [[0,1],[1,0]] has eigenpairs (-1, (1,-1)/sqrt2) and (+1, (1,1)/sqrt2).
    ComplexMatrix x(2, 2);
    x(0, 1) = 1.0;
    x(1, 0) = 1.0;
    const auto eig = herm_eig(x);
    CHECK(eig.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(eig.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(max_abs_diff(reconstruct(eig), x) < 1e-12);
}

TEST_CASE("herm_eig rejects bad inputs") {
    CHECK_THROWS_AS(herm_eig(ComplexMatrix(2, 3)), DimensionError);
    ComplexMatrix nh(2, 2);
    nh(0, 1) = 1.0;
    nh(1, 0) = 0.5;  // residual 0.5 >> tolerance
    CHECK_THROWS_AS(herm_eig(nh), ShapeError);
}

TEST_CASE("herm_eig reconstruction, residual and unitarity on random Hermitian") {
    for (std::size_t n : {2u, 3u, 5u, 16u, 33u, 64u}) {
        Rng rng(1000 + n);
        const ComplexMatrix h = random_hermitian(n, rng);
        const auto eig = herm_eig(h);

        CHECK(max_abs_diff(reconstruct(eig), h) < 1e-9);

        const ComplexMatrix gram = dagger(eig.eigenvectors) * eig.eigenvectors;
        CHECK(max_abs_diff(gram, ComplexMatrix::identity(n)) < 1e-10);

        CHECK(std::is_sorted(eig.eigenvalues.begin(), eig.eigenvalues.end()));

        const double hnorm = h.frobenius_norm();
        for (std::size_t k = 0; k < n; ++k) {
            double resid = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                Complex hv = 0.0;
                for (std::size_t j = 0; j < n; ++j) hv += h(i, j) * eig.eigenvectors(j, k);
                resid += std::norm(hv - eig.eigenvalues[k] * eig.eigenvectors(i, k));
            }
            CHECK(std::sqrt(resid) <= 1e-10 * hnorm);
        }
    }
}

TEST_CASE("herm_eig handles block-structured matrices exactly") {
    // Two decoupled blocks; the component split must not mix them.
    Rng rng(77);
    const ComplexMatrix a = random_hermitian(3, rng);
    const ComplexMatrix b = random_hermitian(4, rng);
    ComplexMatrix h(7, 7);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) h(i, j) = a(i, j);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) h(3 + i, 3 + j) = b(i, j);
    const auto eig = herm_eig(h);
    CHECK(max_abs_diff(reconstruct(eig), h) < 1e-9);
}

TEST_CASE("singular_values basics") {
    const auto id3 = singular_values(ComplexMatrix::identity(3));
    for (double s : id3) CHECK(s == doctest::Approx(1.0).epsilon(1e-12));

    const auto zero = singular_values(ComplexMatrix(2, 2));
    for (double s : zero) CHECK(s == 0.0);

    // [[0,2],[0,0]]: M†M = diag(0,4), singular values (2, 0) by hand.
    ComplexMatrix m(2, 2);
    m(0, 1) = 2.0;
    const auto sv = singular_values(m);
    CHECK(sv[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(sv[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("singular values of M and M† agree") {
    Rng rng(4242);
    for (int rep = 0; rep < 5; ++rep) {
        const ComplexMatrix m = random_matrix(4, 3, rng);
        const auto s1 = singular_values(m);
        const auto s2 = singular_values(dagger(m));
        REQUIRE(s1.size() == s2.size());
        for (std::size_t k = 0; k < s1.size(); ++k) CHECK(close(s1[k], s2[k], 1e-10));
    }
}

TEST_CASE("trace_norm basics") {
    CHECK(trace_norm(diag2(1.0, -1.0)) == doctest::Approx(2.0).epsilon(1e-12));

    Rng rng(5);
    ComplexMatrix rho = random_psd(4, rng);
    rho *= Complex{1.0 / mat_trace(rho).real(), 0.0};
    CHECK(trace_norm(rho) == doctest::Approx(1.0).epsilon(1e-10));

    CHECK_THROWS_AS(trace_norm(ComplexMatrix(2, 3)), DimensionError);
}

TEST_CASE("trace_norm of the sigma0 - sigma1 difference is 4p") {
    // sigma0 = p(|phi+><phi+| + |01><01|), sigma1 = p(|phi-><phi-| + |10><10|)
    // built by hand on C^2 x C^2; the difference has four orthogonal rank-1
    // terms of weight +-p, so the trace norm is exactly 4p.
    const double q = 0.03, r = 0.03;
    const double p = (1.0 - 2.0 * (q + r)) / (4.0 + 2.0 * std::sqrt(2.0));
    ComplexMatrix diff(4, 4);
    // |phi+><phi+| - |phi-><phi-| has entries 1/2 at (0,3),(3,0) doubled:
    diff(0, 3) = p;  // (|00><11| + |11><00|) from the phi projector difference
    diff(3, 0) = p;
    diff(1, 1) = p;   // |01><01|
    diff(2, 2) = -p;  // -|10><10|
    CHECK(trace_norm(diff) == doctest::Approx(4.0 * p).epsilon(1e-12));
    CHECK(4.0 * p == doctest::Approx(0.515492065112).epsilon(1e-10));
}

TEST_CASE("trace_norm is unitarily invariant and satisfies the triangle inequality") {
    Rng rng(99);
    for (int rep = 0; rep < 5; ++rep) {
        const ComplexMatrix m = random_matrix(4, 4, rng);
        const ComplexMatrix u = gs_unitary(4, rng);
        const ComplexMatrix v = gs_unitary(4, rng);
        CHECK(close(trace_norm(u * m * v), trace_norm(m), 1e-9));

        const ComplexMatrix b = random_matrix(4, 4, rng);
        CHECK(trace_norm(m + b) <= trace_norm(m) + trace_norm(b) + 1e-9);
    }
}

TEST_CASE("trace_norm of Hermitian matrices equals the sum of |eigenvalues|") {
    Rng rng(123);
    const ComplexMatrix h = random_hermitian(6, rng);
    double expect = 0.0;
    for (double lambda : herm_eigvals(h)) expect += std::abs(lambda);
    CHECK(close(trace_norm(h), expect, 1e-10));
}

TEST_CASE("sqrt_psd") {
    CHECK(max_abs_diff(sqrt_psd(ComplexMatrix::identity(3)), ComplexMatrix::identity(3)) < 1e-12);

    ComplexMatrix d(2, 2);
    d(0, 0) = 4.0;
    d(1, 1) = 9.0;
    const ComplexMatrix r = sqrt_psd(d);
    CHECK(r(0, 0).real() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r(1, 1).real() == doctest::Approx(3.0).epsilon(1e-12));

    SUBCASE("rank-1 projector: sqrt(p |v><v|) = sqrt(p) |v><v|") {
        Rng rng(7);
        std::vector<Complex> v(4);
        double norm = 0.0;
        for (auto& x : v) {
            x = rng.cnormal();
            norm += std::norm(x);
        }
        norm = std::sqrt(norm);
        for (auto& x : v) x /= norm;
        const double p = 0.37;
        ComplexMatrix proj(4, 4);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) proj(i, j) = p * v[i] * std::conj(v[j]);
        // sqrt amplifies noise eigenvalues (sqrt(1e-18) ~ 1e-9), so the
        // direct comparison gets a looser tolerance than R*R = H.
        ComplexMatrix expect = std::sqrt(p) / p * proj;
        CHECK(max_abs_diff(sqrt_psd(proj), expect) < 1e-8);
    }

    SUBCASE("squares back to the input on random PSD matrices") {
        Rng rng(11);
        for (int rep = 0; rep < 5; ++rep) {
            const ComplexMatrix h = random_psd(5, rng);
            const ComplexMatrix r5 = sqrt_psd(h);
            CHECK(hermiticity_residual(r5) < 1e-10);
            CHECK(max_abs_diff(r5 * r5, h) < 1e-9 * std::max(1.0, h.max_abs()));
        }
    }

    SUBCASE("rejects indefinite input") {
        CHECK_THROWS_AS(sqrt_psd(diag2(1.0, -0.5)), NotPsdError);
    }
}

TEST_CASE("kron") {
    CHECK(max_abs_diff(kron(ComplexMatrix::identity(2), ComplexMatrix::identity(2)),
                       ComplexMatrix::identity(4)) == 0.0);

    const ComplexMatrix d = kron(diag2(2.0, 3.0), ComplexMatrix::identity(2));
    CHECK(d(0, 0).real() == 2.0);
    CHECK(d(1, 1).real() == 2.0);
    CHECK(d(2, 2).real() == 3.0);
    CHECK(d(3, 3).real() == 3.0);

    Rng rng(17);
    const ComplexMatrix a = random_matrix(2, 2, rng);
    const ComplexMatrix b = random_matrix(2, 2, rng);
    const Complex lhs = mat_trace(kron(a, b));
    const Complex rhs = mat_trace(a) * mat_trace(b);
    CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("dagger and mat_trace") {
    Rng rng(23);
    const ComplexMatrix m = random_matrix(3, 2, rng);
    CHECK(max_abs_diff(dagger(dagger(m)), m) == 0.0);

    CHECK(mat_trace(ComplexMatrix::identity(5)).real() == doctest::Approx(5.0));
    CHECK_THROWS_AS(mat_trace(ComplexMatrix(2, 3)), DimensionError);

    const ComplexMatrix a = random_matrix(3, 3, rng);
    const ComplexMatrix b = random_matrix(3, 3, rng);
    CHECK(std::abs(mat_trace(a * b) - mat_trace(b * a)) < 1e-12);
}

} // TEST_SUITE
