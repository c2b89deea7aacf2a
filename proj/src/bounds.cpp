#include "pptbound/bounds.hpp"

#include <cmath>
#include <string>

namespace pptbound {

PptVerdict is_ppt(const QuantumState& s, double tolerance) {
    const LabeledMatrix pt = partial_transpose(s);
    const auto evals = herm_eigvals(pt.matrix);
    const double floor = -tolerance * static_cast<double>(s.dim());
    return {evals.front() >= floor, evals.front()};
}

QuantumState bell_twirl(const QuantumState& s) {
    BlockForm form = blocks(s);
    const std::size_t m = form.shield_dim();

    const ComplexMatrix outer = 0.5 * (form.block(0, 0) + form.block(3, 3));
    const ComplexMatrix inner = 0.5 * (form.block(1, 1) + form.block(2, 2));
    const ComplexMatrix corner = 0.5 * (form.block(0, 3) + form.block(3, 0));

    for (std::size_t br = 0; br < 4; ++br) {
        for (std::size_t bc = 0; bc < 4; ++bc) form.block(br, bc) = ComplexMatrix(m, m);
    }
    form.block(0, 0) = outer;
    form.block(3, 3) = outer;
    form.block(1, 1) = inner;
    form.block(2, 2) = inner;
    form.block(0, 3) = corner;
    form.block(3, 0) = corner;
    return reassemble(form);
}

SigmaBlocks sigma_blocks(const QuantumState& s) {
    const BlockForm form = blocks(s);

    // Parity-violating blocks (odd total key parity) must vanish.
    for (std::size_t br = 0; br < 4; ++br) {
        for (std::size_t bc = 0; bc < 4; ++bc) {
            const std::size_t parity = (br ^ bc) == 1 || (br ^ bc) == 2 ? 1 : 0;
            if (parity == 1 && form.block(br, bc).max_abs() > tol::EIG_TOL) {
                throw ShapeError("off-Bell-diagonal key block is nonzero");
            }
        }
    }
    if (max_abs_diff(form.block(0, 0), form.block(3, 3)) > tol::EIG_TOL) {
        throw ShapeError("outer diagonal blocks differ");
    }
    if (max_abs_diff(form.block(1, 1), form.block(2, 2)) > tol::EIG_TOL) {
        throw ShapeError("inner diagonal blocks differ");
    }
    if (hermiticity_residual(form.block(0, 3)) > tol::EIG_TOL) {
        throw ShapeError("corner block is not Hermitian");
    }

    const ComplexMatrix outer = 0.5 * (form.block(0, 0) + form.block(3, 3));
    const ComplexMatrix corner = 0.5 * (form.block(0, 3) + form.block(3, 0));
    SigmaBlocks out{outer + corner, outer - corner, ComplexMatrix(1, 1), std::nullopt};

    const ComplexMatrix inner = 0.5 * (form.block(1, 1) + form.block(2, 2));
    if (form.block(1, 2).max_abs() <= tol::EIG_TOL) {
        out.sigma2 = inner;
    } else {
        if (hermiticity_residual(form.block(1, 2)) > tol::EIG_TOL) {
            throw ShapeError("psi-sector coherence block is not Hermitian");
        }
        const ComplexMatrix coherence = 0.5 * (form.block(1, 2) + form.block(2, 1));
        out.sigma2 = inner + coherence;
        out.sigma3 = inner - coherence;
    }
    return out;
}

Lemma1Result lemma1_check(const QuantumState& s) {
    const SigmaBlocks sig = sigma_blocks(s);
    if (sig.sigma3.has_value()) {
        throw ShapeError("state has four distinct Bell blocks; twirl before checking");
    }
    if (!is_ppt(s).ppt) {
        throw PreconditionError("bound applies to PPT states only");
    }
    const double lhs = trace_norm(sig.sigma0 - sig.sigma1);
    const double d_alice = static_cast<double>(blocks(s).shield_dim_alice());
    const double rhs = 1.0 - 1.0 / (d_alice + 1.0);
    return {lhs, rhs, rhs - lhs};
}

BoundReport theorem1_bound(const QuantumState& s, std::optional<std::size_t> hphh_shield_d) {
    BoundReport report;
    report.dims = s.factors();

    const BlockForm form = blocks(s);
    const ComplexMatrix& corner = form.block(0, 3);
    report.a0011_hermitian = hermiticity_residual(corner) <= tol::EIG_TOL;
    report.a0011_norm = trace_norm(corner);
    report.prop1_lower = std::max(0.0, 0.5 - report.a0011_norm);

    const PptVerdict verdict = is_ppt(s);
    report.is_ppt = verdict.ppt;
    report.min_pt_eigenvalue = verdict.min_eigenvalue;

    const std::size_t da = form.shield_dim_alice();
    const std::size_t db = form.shield_dim_bob();
    if (report.is_ppt && report.a0011_hermitian && da == db) {
        report.theorem1_lower = 1.0 / (2.0 * (static_cast<double>(da) + 1.0));
        report.margins.theorem1 = (0.5 - *report.theorem1_lower) - report.a0011_norm;
    }

    if (report.is_ppt) {
        // Any state reaches the Bell-diagonal block form by twirling, which
        // preserves PPT, so the dimension bound applies to the twirled sigmas.
        try {
            const SigmaBlocks sig = sigma_blocks(s);
            if (!sig.sigma3.has_value()) {
                report.lemma1_lhs = trace_norm(sig.sigma0 - sig.sigma1);
            }
        } catch (const ShapeError&) {
        }
        if (!report.lemma1_lhs.has_value()) {
            const SigmaBlocks sig = sigma_blocks(bell_twirl(s));
            report.lemma1_lhs = trace_norm(sig.sigma0 - sig.sigma1);
        }
        report.lemma1_rhs = 1.0 - 1.0 / (static_cast<double>(da) + 1.0);
        report.margins.lemma1 = *report.lemma1_rhs - *report.lemma1_lhs;
    }

    if (hphh_shield_d.has_value()) {
        report.hphh_lower = hphh_bound(*hphh_shield_d);
        report.margins.hphh = (0.5 - *report.hphh_lower) - report.a0011_norm;
    }
    return report;
}

double hphh_bound(std::size_t d) {
    if (d < 2) throw ParameterError("hphh_bound requires shield dimension d >= 2");
    return 1.0 / (2.0 * (std::sqrt(static_cast<double>(d)) + 1.0));
}

QuantumState sample_ppt_belldia(std::size_t d_shield, std::uint64_t seed,
                                std::size_t max_attempts) {
    if (max_attempts < 1) throw ParameterError("max_attempts must be at least 1");
    const std::size_t m = d_shield * d_shield;

    for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
        Rng rng(Rng::child_seed(seed, attempt));

        // Mixing each weight toward the maximally mixed state keeps the PPT
        // acceptance rate practical without trivializing the margin test.
        std::vector<ComplexMatrix> sigma;
        for (int k = 0; k < 3; ++k) {
            ComplexMatrix base = random_density(m, m, rng).matrix();
            base *= Complex{0.5, 0.0};
            base += (0.5 / static_cast<double>(m)) * ComplexMatrix::identity(m);
            sigma.push_back(std::move(base));
        }
        const double u0 = rng.uniform() + 1e-6;
        const double u1 = rng.uniform() + 1e-6;
        const double u2 = rng.uniform() + 1e-6;
        const double denom = u0 + u1 + 2.0 * u2;
        sigma[0] *= Complex{u0 / denom, 0.0};
        sigma[1] *= Complex{u1 / denom, 0.0};
        sigma[2] *= Complex{u2 / denom, 0.0};

        const ComplexMatrix plus = 0.5 * (sigma[0] + sigma[1]);
        const ComplexMatrix minus = 0.5 * (sigma[0] - sigma[1]);
        ComplexMatrix matrix(4 * m, 4 * m);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                matrix(i, j) = plus(i, j);
                matrix(3 * m + i, 3 * m + j) = plus(i, j);
                matrix(i, 3 * m + j) = minus(i, j);
                matrix(3 * m + i, j) = minus(i, j);
                matrix(m + i, m + j) = sigma[2](i, j);
                matrix(2 * m + i, 2 * m + j) = sigma[2](i, j);
            }
        }
        QuantumState candidate = QuantumState::from_parts(
            std::move(matrix), {{2, Owner::alice, Role::key},
                                {2, Owner::bob, Role::key},
                                {d_shield, Owner::alice, Role::shield},
                                {d_shield, Owner::bob, Role::shield}});
        if (is_ppt(candidate).ppt) return candidate;
    }
    throw SamplingError("no PPT sample within " + std::to_string(max_attempts) + " attempts");
}

} // namespace pptbound
