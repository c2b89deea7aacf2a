#include "pptbound/families.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace pptbound {

namespace {

constexpr double SQRT2 = std::numbers::sqrt2;

ComplexMatrix kron_power(const ComplexMatrix& m, std::size_t n) {
    ComplexMatrix out = ComplexMatrix::identity(1);
    for (std::size_t k = 0; k < n; ++k) out = kron(out, m);
    return out;
}

// 4x4 grid over a shield of dimension m, key basis |00>,|01>,|10>,|11>.
ComplexMatrix assemble_grid(const std::array<const ComplexMatrix*, 16>& grid, std::size_t m) {
    ComplexMatrix out(4 * m, 4 * m);
    for (std::size_t br = 0; br < 4; ++br) {
        for (std::size_t bc = 0; bc < 4; ++bc) {
            const ComplexMatrix* blk = grid[br * 4 + bc];
            if (blk == nullptr) continue;
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = 0; j < m; ++j) {
                    out(br * m + i, bc * m + j) = (*blk)(i, j);
                }
            }
        }
    }
    return out;
}

// Bell projectors on C^2 x C^2, order phi+, phi-, psi+, psi-.
ComplexMatrix bell_projector(std::size_t which) {
    ComplexMatrix m(4, 4);
    const std::size_t a = which < 2 ? 0 : 1;   // phi: span{|00>,|11>}, psi: span{|01>,|10>}
    const double sign = which % 2 == 0 ? 1.0 : -1.0;
    const std::size_t i0 = a == 0 ? 0 : 1;
    const std::size_t i1 = a == 0 ? 3 : 2;
    m(i0, i0) = 0.5;
    m(i1, i1) = 0.5;
    m(i0, i1) = 0.5 * sign;
    m(i1, i0) = 0.5 * sign;
    return m;
}

// sigma blocks shared by the class-A and class-B families.
ComplexMatrix sigma0_of(double p) {
    ComplexMatrix m = bell_projector(0);
    m(1, 1) += 1.0;  // |01><01|
    m *= Complex{p, 0.0};
    return m;
}

ComplexMatrix sigma1_of(double p) {
    ComplexMatrix m = bell_projector(1);
    m(2, 2) += 1.0;  // |10><10|
    m *= Complex{p, 0.0};
    return m;
}

ComplexMatrix sigma2_of(double p, double q, double r) {
    ComplexMatrix m(4, 4);
    m(1, 1) = p / SQRT2;
    m(2, 2) = p / SQRT2;
    m(0, 0) = q;
    m(3, 3) = r;
    return m;
}

std::vector<FactorLabel> canonical_factors(std::size_t d_alice, std::size_t d_bob) {
    return {{2, Owner::alice, Role::key},
            {2, Owner::bob, Role::key},
            {d_alice, Owner::alice, Role::shield},
            {d_bob, Owner::bob, Role::shield}};
}

// Regroup [A, B, (A'B') x pairs] into (A, B, all A', all B').
QuantumState regroup_pairs(const QuantumState& s, std::size_t pairs) {
    std::vector<std::size_t> perm = {0, 1};
    for (std::size_t k = 0; k < pairs; ++k) perm.push_back(2 + 2 * k);
    for (std::size_t k = 0; k < pairs; ++k) perm.push_back(3 + 2 * k);
    return permute_factors(s, perm);
}

void check_class_a(double q, double r) {
    constexpr double limit = (2.0 - SQRT2) / 8.0;
    if (!(q > 0.0) || !(r > 0.0)) {
        throw ParameterError("class-A weights require q > 0 and r > 0");
    }
    if (!(q + r < limit)) {
        throw ParameterError("class-A weights require q + r < (2 - sqrt2)/8 ~ 0.0732233");
    }
}

} // namespace

QuantumState hhho_state(const HhhoParams& params, std::size_t dim_cap) {
    if (params.d < 2) throw ParameterError("hhho requires local dimension d >= 2");
    if (params.l < 1 || params.m < 1) throw ParameterError("hhho requires l >= 1 and m >= 1");
    if (!(params.p >= 0.0 && params.p < 0.5)) {
        throw ParameterError("hhho requires mixing weight p in [0, 1/2)");
    }
    double dim = 4.0;
    for (std::size_t k = 0; k < 2 * params.l * params.m; ++k) dim *= double(params.d);
    if (dim > double(dim_cap)) {
        throw SizeError("hhho instance dimension " + std::to_string(dim) + " exceeds cap " +
                        std::to_string(dim_cap));
    }

    const ComplexMatrix tau0 = kron_power(werner_sym(params.d).matrix(), params.l);
    ComplexMatrix mix = werner_antisym(params.d).matrix() + werner_sym(params.d).matrix();
    mix *= Complex{0.5, 0.0};
    const ComplexMatrix tau1 = kron_power(mix, params.l);

    const double p = params.p;
    const ComplexMatrix corner = kron_power(p * (tau1 - tau0), params.m);
    const ComplexMatrix outer = kron_power(p * (tau1 + tau0), params.m);
    const ComplexMatrix inner = kron_power((1.0 - 2.0 * p) * tau0, params.m);
    const double norm = 2.0 * std::pow(2.0 * p, double(params.m)) +
                        2.0 * std::pow(1.0 - 2.0 * p, double(params.m));

    const std::size_t m = outer.rows();
    ComplexMatrix matrix = assemble_grid({&outer, nullptr, nullptr, &corner,
                                          nullptr, &inner, nullptr, nullptr,
                                          nullptr, nullptr, &inner, nullptr,
                                          &corner, nullptr, nullptr, &outer},
                                         m);
    matrix *= Complex{1.0 / norm, 0.0};

    std::vector<FactorLabel> factors = {{2, Owner::alice, Role::key},
                                        {2, Owner::bob, Role::key}};
    for (std::size_t k = 0; k < params.l * params.m; ++k) {
        factors.push_back({params.d, Owner::alice, Role::shield});
        factors.push_back({params.d, Owner::bob, Role::shield});
    }
    const QuantumState interleaved = QuantumState::from_parts(std::move(matrix), std::move(factors));
    return regroup_pairs(interleaved, params.l * params.m);
}

double cckkl_a_weight(double q, double r) {
    return (1.0 - 2.0 * (q + r)) / (4.0 + 2.0 * SQRT2);
}

QuantumState cckkl_a_state(double q, double r) {
    check_class_a(q, r);
    const double p = cckkl_a_weight(q, r);
    const ComplexMatrix s0 = sigma0_of(p);
    const ComplexMatrix s1 = sigma1_of(p);
    const ComplexMatrix s2 = sigma2_of(p, q, r);

    const ComplexMatrix plus = 0.5 * (s0 + s1);
    const ComplexMatrix minus = 0.5 * (s0 - s1);
    ComplexMatrix matrix = assemble_grid({&plus, nullptr, nullptr, &minus,
                                          nullptr, &s2, nullptr, nullptr,
                                          nullptr, nullptr, &s2, nullptr,
                                          &minus, nullptr, nullptr, &plus},
                                         4);
    return QuantumState::from_parts(std::move(matrix), canonical_factors(2, 2));
}

double cckkl_a_power_norm_literal(double q, double r, std::size_t n) {
    const double p = cckkl_a_weight(q, r);
    return std::pow(2.0, double(n + 1)) *
           (std::pow(2.0 * p, double(n)) + std::pow(SQRT2 * p + 2.0 * q + 2.0 * r, double(n)));
}

double cckkl_a_power_norm_exact(double q, double r, std::size_t n) {
    const double p = cckkl_a_weight(q, r);
    return 2.0 * std::pow(4.0 * p, double(n)) +
           2.0 * std::pow(2.0 * SQRT2 * p + 2.0 * q + 2.0 * r, double(n));
}

QuantumState cckkl_a_power(double q, double r, std::size_t n, std::size_t dim_cap) {
    check_class_a(q, r);
    if (n < 1) throw ParameterError("tensor power n must be at least 1");
    double dim = 4.0;
    for (std::size_t k = 0; k < n; ++k) dim *= 4.0;
    if (dim > double(dim_cap)) {
        throw SizeError("power instance dimension " + std::to_string(dim) + " exceeds cap " +
                        std::to_string(dim_cap));
    }
    const double p = cckkl_a_weight(q, r);
    const ComplexMatrix s0 = sigma0_of(p);
    const ComplexMatrix s1 = sigma1_of(p);
    const ComplexMatrix s2 = sigma2_of(p, q, r);

    const ComplexMatrix plus = kron_power(s0 + s1, n);
    const ComplexMatrix minus = kron_power(s0 - s1, n);
    const ComplexMatrix inner = kron_power(2.0 * s2, n);

    const std::size_t m = plus.rows();
    ComplexMatrix matrix = assemble_grid({&plus, nullptr, nullptr, &minus,
                                          nullptr, &inner, nullptr, nullptr,
                                          nullptr, nullptr, &inner, nullptr,
                                          &minus, nullptr, nullptr, &plus},
                                         m);
    matrix *= Complex{1.0 / cckkl_a_power_norm_exact(q, r, n), 0.0};

    std::vector<FactorLabel> factors = {{2, Owner::alice, Role::key},
                                        {2, Owner::bob, Role::key}};
    for (std::size_t k = 0; k < n; ++k) {
        factors.push_back({2, Owner::alice, Role::shield});
        factors.push_back({2, Owner::bob, Role::shield});
    }
    const QuantumState interleaved = QuantumState::from_parts(std::move(matrix), std::move(factors));
    return regroup_pairs(interleaved, n);
}

QuantumState cckkl_b_state(double q, std::optional<std::array<std::vector<Complex>, 2>> x_basis) {
    constexpr double limit = (2.0 - SQRT2) / 8.0;
    if (!(q > 0.0 && q < limit)) {
        throw ParameterError("class-B weight requires 0 < q < (2 - sqrt2)/8 ~ 0.0732233");
    }
    const double p = (1.0 - 2.0 * q) / (4.0 + 2.0 * SQRT2);

    std::array<std::vector<Complex>, 2> basis;
    if (x_basis.has_value()) {
        basis = std::move(*x_basis);
    } else {
        const double inv = 1.0 / SQRT2;
        basis[0] = {0.0, inv, inv, 0.0};
        basis[1] = {0.0, inv, -inv, 0.0};
    }
    for (const auto& x : basis) {
        if (x.size() != 4) throw ParameterError("x-basis vectors must live on C^2 x C^2");
    }
    ComplexMatrix span(4, 4);
    for (const auto& x : basis) {
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = 0; j < 4; ++j) span(i, j) += x[i] * std::conj(x[j]);
        }
    }
    ComplexMatrix target(4, 4);
    target(1, 1) = 1.0;
    target(2, 2) = 1.0;
    if (max_abs_diff(span, target) > tol::EIG_TOL) {
        throw ParameterError("x-basis must be an orthonormal pair spanning span{|01>, |10>}");
    }

    std::array<ComplexMatrix, 4> sigma = {sigma0_of(p), sigma1_of(p), ComplexMatrix(4, 4),
                                          ComplexMatrix(4, 4)};
    for (std::size_t which : {0u, 1u}) {
        ComplexMatrix& s = sigma[2 + which];
        const auto& x = basis[which];
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = 0; j < 4; ++j) s(i, j) = SQRT2 * p * x[i] * std::conj(x[j]);
        }
        s(0, 0) += q;  // q|00><00|
    }

    ComplexMatrix matrix(16, 16);
    for (std::size_t k = 0; k < 4; ++k) matrix += kron(bell_projector(k), sigma[k]);
    return QuantumState::from_parts(std::move(matrix), canonical_factors(2, 2));
}

ComplexMatrix w_u(const ComplexMatrix& u) {
    if (!u.is_square()) throw ParameterError("w_u requires a square unitary");
    const std::size_t d = u.rows();
    if (max_abs_diff(dagger(u) * u, ComplexMatrix::identity(d)) > tol::EIG_TOL) {
        throw ParameterError("w_u requires a unitary matrix");
    }
    ComplexMatrix w(d * d, d * d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) w(i * d + j, j * d + i) = u(i, j);
    }
    return w;
}

HphhParams hphh_params(const ComplexMatrix& u) {
    const std::size_t d = u.rows();
    if (!u.is_square() ||
        max_abs_diff(dagger(u) * u, ComplexMatrix::identity(d)) > tol::EIG_TOL) {
        throw ParameterError("hphh_params requires a unitary matrix");
    }
    double w_norm = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) w_norm += std::abs(u(i, j));
    }
    const double dd = static_cast<double>(d);
    if (w_norm < dd - tol::EQ_TOL || w_norm > dd * std::sqrt(dd) + tol::EQ_TOL) {
        throw ParameterError("unitary absolute entry sum outside [d, d sqrt(d)]");
    }
    return {u, w_norm, w_norm / (w_norm + dd)};
}

QuantumState hphh_general(const ComplexMatrix& x1, const ComplexMatrix& x2, double p) {
    if (!x1.is_square() || !x2.is_square() || x1.rows() != x2.rows()) {
        throw ParameterError("hphh blocks must be square and equally sized");
    }
    const std::size_t m = x1.rows();
    const auto d = static_cast<std::size_t>(std::llround(std::sqrt(double(m))));
    if (d * d != m) throw ParameterError("hphh block dimension must be a perfect square");
    if (std::abs(trace_norm(x1) - 1.0) > tol::EQ_TOL ||
        std::abs(trace_norm(x2) - 1.0) > tol::EQ_TOL) {
        throw ParameterError("hphh blocks must have unit trace norm");
    }
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("hphh weight p must lie in [0, 1]");

    const ComplexMatrix a1 = 0.5 * p * sqrt_psd(x1 * dagger(x1));
    const ComplexMatrix b1 = 0.5 * p * sqrt_psd(dagger(x1) * x1);
    const ComplexMatrix a2 = 0.5 * (1.0 - p) * sqrt_psd(x2 * dagger(x2));
    const ComplexMatrix b2 = 0.5 * (1.0 - p) * sqrt_psd(dagger(x2) * x2);
    const ComplexMatrix c1 = 0.5 * p * x1;
    const ComplexMatrix c1d = dagger(c1);
    const ComplexMatrix c2 = 0.5 * (1.0 - p) * x2;
    const ComplexMatrix c2d = dagger(c2);

    ComplexMatrix matrix = assemble_grid({&a1, nullptr, nullptr, &c1,
                                          nullptr, &a2, &c2, nullptr,
                                          nullptr, &c2d, &b2, nullptr,
                                          &c1d, nullptr, nullptr, &b1},
                                         m);

    const auto evals = herm_eigvals(matrix);
    if (evals.front() < -tol::PSD_TOL * double(4 * m)) {
        throw ConstructionError("assembled block matrix is not positive semidefinite");
    }
    return QuantumState::from_parts(std::move(matrix), canonical_factors(d, d));
}

QuantumState hphh_from_unitary(const ComplexMatrix& u, std::size_t dim_cap) {
    const std::size_t d = u.rows();
    const std::size_t dim = 4 * d * d;
    if (dim > dim_cap) {
        throw SizeError("hphh instance dimension " + std::to_string(dim) + " exceeds cap " +
                        std::to_string(dim_cap));
    }
    const ComplexMatrix w = w_u(u);
    const std::vector<FactorLabel> wf = {{d, Owner::alice, Role::shield},
                                         {d, Owner::bob, Role::shield}};
    const std::vector<std::size_t> second = {1};
    const ComplexMatrix wg = partial_transpose(LabeledMatrix{w, wf}, second).matrix;

    const double nw = trace_norm(w);
    const double nwg = trace_norm(wg);
    const double p = nw / (nw + nwg);
    return hphh_general(1.0 / nw * w, 1.0 / nwg * wg, p);
}

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("binary_entropy requires p in [0, 1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

KeyRateBound hphh_key_rate_lower(const HphhParams& params) {
    const double raw = 1.0 - binary_entropy(params.p);
    return {raw, std::max(0.0, raw)};
}

ComplexMatrix fourier_unitary(std::size_t d) {
    if (d < 1) throw ParameterError("fourier_unitary requires d >= 1");
    ComplexMatrix m(d, d);
    const double inv = 1.0 / std::sqrt(double(d));
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t k = 0; k < d; ++k) {
            const double angle = 2.0 * std::numbers::pi * double(j * k % d) / double(d);
            m(j, k) = Complex{inv * std::cos(angle), inv * std::sin(angle)};
        }
    }
    return m;
}

} // namespace pptbound
