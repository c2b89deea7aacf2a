#include "pptbound/pbit.hpp"

#include <cmath>
#include <string>

namespace pptbound {

namespace {

bool is_unitary(const ComplexMatrix& u) {
    if (!u.is_square()) return false;
    return max_abs_diff(dagger(u) * u, ComplexMatrix::identity(u.rows())) <= tol::EIG_TOL;
}

void require_key_front(const QuantumState& s) {
    const auto& f = s.factors();
    if (f.size() < 2 || f[0].dim != 2 || f[1].dim != 2 || f[0].role != Role::key ||
        f[1].role != Role::key || f[0].owner != Owner::alice || f[1].owner != Owner::bob) {
        throw ShapeError("state must start with 2-dimensional Alice and Bob key factors");
    }
}

} // namespace

BlockForm::BlockForm(std::vector<ComplexMatrix> blocks, std::vector<FactorLabel> key_factors,
                     std::vector<FactorLabel> shield_factors)
    : blocks_(std::move(blocks)),
      key_factors_(std::move(key_factors)),
      shield_factors_(std::move(shield_factors)) {}

std::size_t BlockForm::shield_dim() const { return factors_dim(shield_factors_); }

std::size_t BlockForm::shield_dim_alice() const {
    std::size_t dim = 1;
    for (const auto& f : shield_factors_) {
        if (f.owner == Owner::alice) dim *= f.dim;
    }
    return dim;
}

std::size_t BlockForm::shield_dim_bob() const {
    std::size_t dim = 1;
    for (const auto& f : shield_factors_) {
        if (f.owner == Owner::bob) dim *= f.dim;
    }
    return dim;
}

void validate_pbit_params(const PbitParams& params) {
    if (!is_unitary(params.u00) || !is_unitary(params.u11)) {
        throw ParameterError("pbit twisting matrices must be unitary");
    }
    if (params.u00.rows() != params.shield.dim() || params.u11.rows() != params.shield.dim()) {
        throw ParameterError("pbit twisting matrices must act on the shield space");
    }
}

QuantumState make_pbit(const PbitParams& params) {
    validate_pbit_params(params);
    const std::size_t m = params.shield.dim();
    const ComplexMatrix* twist[2] = {&params.u00, &params.u11};

    ComplexMatrix out(4 * m, 4 * m);
    for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
            const ComplexMatrix piece =
                0.5 * ((*twist[k]) * params.shield.matrix() * dagger(*twist[l]));
            const std::size_t br = k == 0 ? 0 : 3;  // |kk> key index
            const std::size_t bc = l == 0 ? 0 : 3;
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = 0; j < m; ++j) out(br * m + i, bc * m + j) = piece(i, j);
            }
        }
    }

    std::vector<FactorLabel> factors = {{2, Owner::alice, Role::key},
                                        {2, Owner::bob, Role::key}};
    factors.insert(factors.end(), params.shield.factors().begin(),
                   params.shield.factors().end());
    return QuantumState::from_parts(std::move(out), std::move(factors));
}

BlockForm blocks(const QuantumState& s) {
    require_key_front(s);
    const std::size_t m = s.dim() / 4;
    std::vector<ComplexMatrix> grid(16, ComplexMatrix(m, m));
    for (std::size_t br = 0; br < 4; ++br) {
        for (std::size_t bc = 0; bc < 4; ++bc) {
            ComplexMatrix& blk = grid[br * 4 + bc];
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = 0; j < m; ++j) blk(i, j) = s.matrix()(br * m + i, bc * m + j);
            }
        }
    }
    std::vector<FactorLabel> keys(s.factors().begin(), s.factors().begin() + 2);
    std::vector<FactorLabel> shield(s.factors().begin() + 2, s.factors().end());
    return BlockForm(std::move(grid), std::move(keys), std::move(shield));
}

QuantumState reassemble(const BlockForm& form) {
    const std::size_t m = form.shield_dim();
    ComplexMatrix out(4 * m, 4 * m);
    for (std::size_t br = 0; br < 4; ++br) {
        for (std::size_t bc = 0; bc < 4; ++bc) {
            const ComplexMatrix& blk = form.block(br, bc);
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = 0; j < m; ++j) out(br * m + i, bc * m + j) = blk(i, j);
            }
        }
    }
    std::vector<FactorLabel> factors = form.key_factors();
    factors.insert(factors.end(), form.shield_factors().begin(), form.shield_factors().end());
    return QuantumState::from_parts(std::move(out), std::move(factors));
}

double a0011_norm(const QuantumState& s) { return trace_norm(blocks(s).block(0, 3)); }

double prop1_lower_bound(const QuantumState& s) {
    return std::max(0.0, 0.5 - a0011_norm(s));
}

KeyCorrelation key_correlation(const QuantumState& s) {
    const BlockForm form = blocks(s);
    const double p00 = mat_trace(form.block(0, 0)).real();
    const double p11 = mat_trace(form.block(3, 3)).real();
    if (p00 < 1e-12 || p11 < 1e-12) {
        throw DegenerateOutcomeError("key outcome probability vanishes; Eve fidelity undefined");
    }

    const PureState psi = purify(s);
    const std::size_t rank = psi.factors.back().dim;
    const std::size_t m = form.shield_dim();

    // Eve's conditional state for key outcome |kk>: contract the shield index.
    const auto eve_state = [&](std::size_t key_index) {
        ComplexMatrix eve(rank, rank);
        for (std::size_t shield = 0; shield < m; ++shield) {
            const std::size_t base = (key_index * m + shield) * rank;
            for (std::size_t e = 0; e < rank; ++e) {
                const Complex a = psi.amplitudes[base + e];
                if (a == Complex{0.0, 0.0}) continue;
                for (std::size_t f = 0; f < rank; ++f) {
                    eve(e, f) += a * std::conj(psi.amplitudes[base + f]);
                }
            }
        }
        eve *= Complex{1.0 / mat_trace(eve).real(), 0.0};
        return eve;
    };

    const double f = fidelity(eve_state(0), eve_state(3));
    return {p00, p11, f, std::sqrt(p00 * p11) * f};
}

bool is_pbit(const QuantumState& s, double tolerance) {
    const BlockForm form = blocks(s);
    const double p00 = mat_trace(form.block(0, 0)).real();
    const double p11 = mat_trace(form.block(3, 3)).real();
    if (std::abs(p00 - 0.5) > tolerance || std::abs(p11 - 0.5) > tolerance) return false;
    return std::abs(trace_norm(form.block(0, 3)) - 0.5) <= tolerance;
}

PbitParams random_pbit_params(std::size_t d_alice, std::size_t d_bob, std::uint64_t seed) {
    const std::size_t m = d_alice * d_bob;
    const ComplexMatrix u00 = haar_unitary(m, Rng::child_seed(seed, 1));
    const ComplexMatrix u11 = haar_unitary(m, Rng::child_seed(seed, 2));
    QuantumState shield = random_density(m, m, Rng::child_seed(seed, 3));
    shield = with_factors(shield, {{d_alice, Owner::alice, Role::shield},
                                   {d_bob, Owner::bob, Role::shield}});
    return {u00, u11, std::move(shield)};
}

} // namespace pptbound
