#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "pptbound/qstate.hpp"
#include "test_support.hpp"

using namespace pptbound;
using namespace pptbound::testing;

namespace {

QuantumState random_state(const std::vector<FactorLabel>& factors, std::size_t rank,
                          std::uint64_t seed) {
    const std::size_t dim = factors_dim(factors);
    return with_factors(random_density(dim, rank, seed), factors);
}

PureState max_entangled(std::size_t d) {
    PureState psi;
    psi.factors = {{d, Owner::alice, Role::key}, {d, Owner::bob, Role::key}};
    psi.amplitudes.assign(d * d, Complex{0.0, 0.0});
    for (std::size_t i = 0; i < d; ++i) psi.amplitudes[i * d + i] = 1.0 / std::sqrt(double(d));
    return psi;
}

QuantumState product_state(const QuantumState& a, const QuantumState& b) {
    std::vector<FactorLabel> factors = a.factors();
    factors.insert(factors.end(), b.factors().begin(), b.factors().end());
    return QuantumState::from_parts(kron(a.matrix(), b.matrix()), std::move(factors));
}

} // namespace

TEST_SUITE("qstate") {

TEST_CASE("partial transpose of a product state transposes one side") {
    const QuantumState a = random_density(2, 2, 11);
    QuantumState b = random_density(3, 3, 12);
    b = with_factors(b, {{3, Owner::bob, Role::shield}});
    const QuantumState ab = product_state(a, b);

    const LabeledMatrix pt = partial_transpose(ab);  // Bob cut = second factor
    ComplexMatrix bt(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) bt(i, j) = b.matrix()(j, i);
    CHECK(max_abs_diff(pt.matrix, kron(a.matrix(), bt)) < 1e-14);

    // still PSD for a product state
    CHECK(herm_eigvals(pt.matrix).front() > -1e-12);
}

TEST_CASE("partial transpose is a trace/hermiticity preserving involution") {
    const std::vector<std::vector<FactorLabel>> configs = {
        {{2, Owner::alice, Role::key}, {2, Owner::bob, Role::key}},
        {{2, Owner::alice, Role::key}, {3, Owner::bob, Role::shield}},
        {{2, Owner::alice, Role::key}, {2, Owner::bob, Role::key}, {2, Owner::bob, Role::shield}},
    };
    for (const auto& factors : configs) {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const QuantumState s = random_state(factors, factors_dim(factors), 300 + seed);
            const LabeledMatrix pt = partial_transpose(s);
            CHECK(hermiticity_residual(pt.matrix) < 1e-12);
            CHECK(std::abs(mat_trace(pt.matrix) - Complex{1.0, 0.0}) < 1e-12);

            std::vector<std::size_t> bob;
            for (std::size_t f = 0; f < factors.size(); ++f) {
                if (factors[f].owner == Owner::bob) bob.push_back(f);
            }
            const LabeledMatrix back = partial_transpose(pt, bob);
            CHECK(max_abs_diff(back.matrix, s.matrix()) == 0.0);
        }
    }
}

TEST_CASE("partial transpose of the Bell state has eigenvalue -1/2") {
    const QuantumState bell = to_density(bell_state(BellKind::phi_plus));
    const auto evals = herm_eigvals(partial_transpose(bell).matrix);
    CHECK(evals.front() == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("partial transpose selector errors") {
    const QuantumState s = random_state({{2, Owner::alice, Role::key}}, 2, 1);
    const std::vector<std::size_t> bad = {5};
    CHECK_THROWS_AS(partial_transpose(s, bad), SelectorError);
    CHECK_THROWS_AS(partial_transpose(s), SelectorError);  // no Bob factors
}

TEST_CASE("partial trace") {
    const QuantumState a = random_density(2, 2, 21);
    QuantumState b = random_density(2, 2, 22);
    b = with_factors(b, {{2, Owner::bob, Role::key}});
    const QuantumState ab = product_state(a, b);

    const std::vector<std::size_t> keep_a = {0};
    CHECK(max_abs_diff(partial_trace(ab, keep_a).matrix(), a.matrix()) < 1e-14);

    const QuantumState bell = to_density(bell_state(BellKind::phi_plus));
    const QuantumState half = partial_trace(bell, keep_a);
    CHECK(max_abs_diff(half.matrix(), 0.5 * ComplexMatrix::identity(2)) < 1e-14);

    const std::vector<std::size_t> empty = {};
    CHECK_THROWS_AS(partial_trace(ab, empty), SelectorError);
}

TEST_CASE("purification round-trips through the partial trace") {
    const QuantumState rho = random_density(4, 3, 31);
    const PureState psi = purify(rho);
    CHECK(psi.factors.back().owner == Owner::eve);
    CHECK(psi.factors.back().dim == 3);

    const QuantumState lifted = to_density(psi);
    const std::vector<std::size_t> keep = {0};
    CHECK(max_abs_diff(partial_trace(lifted, keep).matrix(), rho.matrix()) < 1e-9);

    SUBCASE("pure input gets a trivial Eve factor") {
        const QuantumState pure = random_density(4, 1, 32);
        CHECK(purify(pure).factors.back().dim == 1);
    }
    SUBCASE("maximally mixed qubit purifies to a Bell-type vector") {
        QuantumState mixed = QuantumState::from_parts(0.5 * ComplexMatrix::identity(2),
                                                      {{2, Owner::alice, Role::key}});
        const PureState p = purify(mixed);
        CHECK(p.factors.back().dim == 2);
        double norm2 = 0.0;
        for (const auto& ampl : p.amplitudes) norm2 += std::norm(ampl);
        CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("fidelity") {
    const QuantumState rho = random_density(4, 4, 41);
    CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-9));

    // orthogonal pure states
    ComplexMatrix p0(2, 2), p1(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    CHECK(fidelity(p0, p1) == doctest::Approx(0.0).epsilon(1e-12));

    SUBCASE("pure states: fidelity equals |<u|v>|") {
        Rng rng(42);
        for (int rep = 0; rep < 5; ++rep) {
            std::vector<Complex> u(3), v(3);
            double nu = 0.0, nv = 0.0;
            for (std::size_t i = 0; i < 3; ++i) {
                u[i] = rng.cnormal();
                v[i] = rng.cnormal();
                nu += std::norm(u[i]);
                nv += std::norm(v[i]);
            }
            Complex overlap = 0.0;
            ComplexMatrix mu(3, 3), mv(3, 3);
            for (std::size_t i = 0; i < 3; ++i) {
                u[i] /= std::sqrt(nu);
                v[i] /= std::sqrt(nv);
            }
            for (std::size_t i = 0; i < 3; ++i) {
                overlap += std::conj(u[i]) * v[i];
                for (std::size_t j = 0; j < 3; ++j) {
                    mu(i, j) = u[i] * std::conj(u[j]);
                    mv(i, j) = v[i] * std::conj(v[j]);
                }
            }
            CHECK(fidelity(mu, mv) == doctest::Approx(std::abs(overlap)).epsilon(1e-8));
        }
    }

    SUBCASE("symmetric and within [0,1]") {
        for (std::uint64_t seed = 50; seed < 60; ++seed) {
            const QuantumState r1 = random_density(3, 3, seed);
            const QuantumState r2 = random_density(3, 2, seed + 100);
            const double f12 = fidelity(r1, r2);
            const double f21 = fidelity(r2, r1);
            CHECK(close(f12, f21, 1e-9));
            CHECK(f12 >= 0.0);
            CHECK(f12 <= 1.0);
        }
    }

    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(fidelity(random_density(2, 2, 1), random_density(3, 3, 1)),
                        DimensionError);
    }
}

TEST_CASE("pure_pt_spectrum closed forms") {
    const std::vector<double> product = {1.0, 0.0};
    const PtSpectrum s1 = pure_pt_spectrum(product);
    CHECK(s1.negative_sum == 0.0);
    CHECK(s1.eigenvalues.size() == 4);
    CHECK(s1.eigenvalues.back() == doctest::Approx(1.0));

    const double inv2 = 1.0 / std::sqrt(2.0);
    const std::vector<double> bell = {inv2, inv2};
    const PtSpectrum s2 = pure_pt_spectrum(bell);
    CHECK(s2.negative_sum == doctest::Approx(0.5).epsilon(1e-12));

    const double inv3 = 1.0 / std::sqrt(3.0);
    const std::vector<double> flat3 = {inv3, inv3, inv3};
    const PtSpectrum s3 = pure_pt_spectrum(flat3);
    CHECK(s3.negative_sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s3.positive_sum == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(s3.positive_sum + s3.negative_sum == doctest::Approx(3.0).epsilon(1e-12));

    const std::vector<double> bad = {1.0, 1.0};
    CHECK_THROWS_AS(pure_pt_spectrum(bad), NormalizationError);
}

TEST_CASE("pure_pt_spectrum matches brute-force partial transpose") {
    for (std::size_t d = 2; d <= 6; ++d) {
        Rng rng(600 + d);
        std::vector<double> schmidt(d);
        double sum2 = 0.0;
        for (auto& a : schmidt) {
            a = std::abs(rng.normal());
            sum2 += a * a;
        }
        for (auto& a : schmidt) a /= std::sqrt(sum2);

        PureState psi;
        psi.factors = {{d, Owner::alice, Role::key}, {d, Owner::bob, Role::key}};
        psi.amplitudes.assign(d * d, Complex{0.0, 0.0});
        for (std::size_t i = 0; i < d; ++i) psi.amplitudes[i * d + i] = schmidt[i];

        auto brute = herm_eigvals(partial_transpose(to_density(psi)).matrix);
        auto formula = pure_pt_spectrum(schmidt).eigenvalues;
        std::sort(brute.begin(), brute.end());
        std::sort(formula.begin(), formula.end());
        REQUIRE(brute.size() == formula.size());
        for (std::size_t k = 0; k < brute.size(); ++k) CHECK(close(brute[k], formula[k], 1e-9));
    }
}

TEST_CASE("trace norm of a pure partial transpose is at most d") {
    for (std::size_t d = 2; d <= 4; ++d) {
        Rng rng(700 + d);
        for (int rep = 0; rep < 5; ++rep) {
            PureState psi;
            psi.factors = {{d, Owner::alice, Role::key}, {d, Owner::bob, Role::key}};
            psi.amplitudes.resize(d * d);
            double norm2 = 0.0;
            for (auto& a : psi.amplitudes) {
                a = rng.cnormal();
                norm2 += std::norm(a);
            }
            for (auto& a : psi.amplitudes) a /= std::sqrt(norm2);
            CHECK(trace_norm(partial_transpose(to_density(psi)).matrix) <=
                  static_cast<double>(d) + 1e-9);
        }
    }
}

TEST_CASE("negativity") {
    const QuantumState a = random_density(2, 2, 71);
    QuantumState b = with_factors(random_density(2, 2, 72), {{2, Owner::bob, Role::key}});
    CHECK(negativity(product_state(a, b)) == 0.0);

    CHECK(negativity(to_density(max_entangled(2))) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(negativity(to_density(max_entangled(3))) == doctest::Approx(1.0).epsilon(1e-10));

    SUBCASE("zero negativity iff PPT within tolerance") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const QuantumState s = random_state(
                {{2, Owner::alice, Role::key}, {2, Owner::bob, Role::key}}, 4, 800 + seed);
            const double neg = negativity(s);
            const double min_eig = herm_eigvals(partial_transpose(s).matrix).front();
            CHECK((neg == 0.0) == (min_eig >= -1e-10));
        }
    }
}

TEST_CASE("bell states and projectors") {
    const ComplexMatrix ps = sym_proj(2);
    const ComplexMatrix pa = antisym_proj(2);
    CHECK(max_abs_diff(ps * ps, ps) < 1e-14);
    CHECK(max_abs_diff(pa * pa, pa) < 1e-14);
    CHECK(max_abs_diff(ps + pa, ComplexMatrix::identity(4)) < 1e-14);
    CHECK(mat_trace(ps).real() == doctest::Approx(3.0));  // rank 3
    CHECK(mat_trace(pa).real() == doctest::Approx(1.0));  // rank 1

    CHECK(mat_trace(werner_sym(2).matrix()).real() == doctest::Approx(1.0).epsilon(1e-12));

    // antisymmetric subspace of d=2 is the singlet
    const QuantumState singlet = to_density(bell_state(BellKind::psi_minus));
    CHECK(max_abs_diff(werner_antisym(2).matrix(), singlet.matrix()) < 1e-14);

    CHECK_THROWS_AS(werner_antisym(1), DimensionError);
}

TEST_CASE("haar_unitary and random_density determinism and validity") {
    const ComplexMatrix u = haar_unitary(5, 97);
    CHECK(max_abs_diff(dagger(u) * u, ComplexMatrix::identity(5)) < 1e-10);

    const ComplexMatrix u2 = haar_unitary(5, 97);
    CHECK(max_abs_diff(u, u2) == 0.0);  // bit-identical under the same seed

    const QuantumState pure = random_density(4, 1, 5);
    CHECK(mat_trace(pure.matrix() * pure.matrix()).real() == doctest::Approx(1.0).epsilon(1e-9));

    const QuantumState r2 = random_density(4, 2, 6);
    const auto evals = herm_eigvals(r2.matrix());
    CHECK(evals[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(evals[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(evals[3] > 1e-3);
    r2.validate();

    CHECK_THROWS_AS(random_density(3, 4, 1), ParameterError);
    CHECK_THROWS_AS(random_density(3, 0, 1), ParameterError);
}

TEST_CASE("permute_factors") {
    const QuantumState a = random_density(2, 2, 81);
    QuantumState b = with_factors(random_density(3, 3, 82), {{3, Owner::bob, Role::shield}});
    const QuantumState ab = product_state(a, b);

    const std::vector<std::size_t> ident = {0, 1};
    CHECK(max_abs_diff(permute_factors(ab, ident).matrix(), ab.matrix()) == 0.0);

    const std::vector<std::size_t> swap = {1, 0};
    const QuantumState ba = permute_factors(ab, swap);
    CHECK(max_abs_diff(ba.matrix(), kron(b.matrix(), a.matrix())) < 1e-14);
    CHECK(ba.factors()[0].owner == Owner::bob);

    SUBCASE("spectrum is invariant under factor permutations") {
        const QuantumState s = random_state({{2, Owner::alice, Role::key},
                                             {2, Owner::bob, Role::key},
                                             {3, Owner::bob, Role::shield}},
                                            12, 83);
        const std::vector<std::size_t> perm = {2, 0, 1};
        const auto before = herm_eigvals(s.matrix());
        const auto after = herm_eigvals(permute_factors(s, perm).matrix());
        for (std::size_t k = 0; k < before.size(); ++k) CHECK(close(before[k], after[k], 1e-10));
    }

    SUBCASE("invalid permutations") {
        const std::vector<std::size_t> dup = {0, 0};
        CHECK_THROWS_AS(permute_factors(ab, dup), ParameterError);
        const std::vector<std::size_t> oob = {0, 7};
        CHECK_THROWS_AS(permute_factors(ab, oob), ParameterError);
    }
}

TEST_CASE("state validation catches bad inputs") {
    ComplexMatrix m = ComplexMatrix::identity(2);  // trace 2
    CHECK_THROWS_AS(QuantumState::from_parts(m, {{2, Owner::alice, Role::key}}),
                    NormalizationError);

    ComplexMatrix nh(2, 2);
    nh(0, 0) = 0.5;
    nh(1, 1) = 0.5;
    nh(0, 1) = 0.3;
    CHECK_THROWS_AS(QuantumState::from_parts(nh, {{2, Owner::alice, Role::key}}), ShapeError);

    ComplexMatrix neg(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(QuantumState::checked(neg, {{2, Owner::alice, Role::key}}), NotPsdError);

    CHECK_THROWS_AS(QuantumState::from_parts(ComplexMatrix::identity(4),
                                             {{2, Owner::alice, Role::key},
                                              {3, Owner::bob, Role::key}}),
                    DimensionError);
}

} // TEST_SUITE
