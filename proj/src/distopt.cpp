#include "pptbound/distopt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pptbound {

namespace {

// exp(i scale H) for Hermitian H via its eigendecomposition.
ComplexMatrix exp_i_hermitian(const ComplexMatrix& h, double scale) {
    const HermEigResult eig = herm_eig(h);
    const std::size_t n = h.rows();
    ComplexMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double angle = scale * eig.eigenvalues[k];
        const Complex phase{std::cos(angle), std::sin(angle)};
        for (std::size_t i = 0; i < n; ++i) {
            const Complex left = phase * eig.eigenvectors(i, k);
            if (left == Complex{0.0, 0.0}) continue;
            for (std::size_t j = 0; j < n; ++j) {
                out(i, j) += left * std::conj(eig.eigenvectors(j, k));
            }
        }
    }
    return out;
}

ComplexMatrix random_unit_hermitian(std::size_t n, Rng& rng) {
    ComplexMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        h(i, i) = rng.normal();
        for (std::size_t j = i + 1; j < n; ++j) {
            const Complex v = 0.5 * rng.cnormal();
            h(i, j) = v;
            h(j, i) = std::conj(v);
        }
    }
    const double norm = h.frobenius_norm();
    h *= Complex{1.0 / norm, 0.0};
    return h;
}

QuantumState mix_toward_pure(const QuantumState& shield, double weight, Rng& rng) {
    const std::size_t n = shield.dim();
    std::vector<Complex> v(n);
    double norm2 = 0.0;
    for (auto& x : v) {
        x = rng.cnormal();
        norm2 += std::norm(x);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    ComplexMatrix m = (1.0 - weight) * shield.matrix();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) += weight * (v[i] * inv) * std::conj(v[j] * inv);
        }
    }
    return QuantumState::from_parts(std::move(m), shield.factors());
}

double pbit_distance(const QuantumState& s, const PbitParams& params) {
    const QuantumState gamma = make_pbit(params);
    return trace_norm(s.matrix() - gamma.matrix());
}

void validate_options(const OptOptions& opts) {
    if (opts.restarts < 1 || opts.max_iters < 1 || opts.decay_after < 1) {
        throw ParameterError("optimizer counts must be at least 1");
    }
    if (!(opts.stop_step > 0.0 && opts.stop_step < opts.init_step)) {
        throw ParameterError("optimizer requires 0 < stop_step < init_step");
    }
}

} // namespace

PbitParams warm_start(const QuantumState& s) {
    const BlockForm form = blocks(s);
    const std::size_t da = form.shield_dim_alice();
    const std::size_t db = form.shield_dim_bob();
    const std::size_t m = form.shield_dim();
    const std::vector<FactorLabel> shield_factors = {{da, Owner::alice, Role::shield},
                                                     {db, Owner::bob, Role::shield}};

    const ComplexMatrix target = 2.0 * form.block(0, 3);
    const HermEigResult gram = herm_eig(dagger(target) * target);

    // singular triples, descending
    std::vector<double> sv(m);
    double total = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double lambda = gram.eigenvalues[m - 1 - k];
        sv[k] = lambda > 0.0 ? std::sqrt(lambda) : 0.0;
        total += sv[k];
    }

    if (total < 1e-12) {
        const QuantumState shield = QuantumState::from_parts(
            (1.0 / static_cast<double>(m)) * ComplexMatrix::identity(m), shield_factors);
        return {ComplexMatrix::identity(m), ComplexMatrix::identity(m), shield};
    }

    ComplexMatrix v(m, m);
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t i = 0; i < m; ++i) v(i, k) = gram.eigenvectors(i, m - 1 - k);
    }

    // left vectors: target * v_k / sv_k where defined, re-orthonormalized in
    // order (small singular values make the raw quotients drift), then
    // completed to a unitary with Gram-Schmidt over the standard basis
    ComplexMatrix w(m, m);
    std::vector<bool> filled(m, false);
    const double cutoff = 1e-8 * sv[0];
    for (std::size_t k = 0; k < m; ++k) {
        if (sv[k] <= cutoff) break;
        std::vector<Complex> col(m);
        for (std::size_t i = 0; i < m; ++i) {
            Complex acc = 0.0;
            for (std::size_t j = 0; j < m; ++j) acc += target(i, j) * v(j, k);
            col[i] = acc / sv[k];
        }
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t c = 0; c < k; ++c) {
                if (!filled[c]) continue;
                Complex proj = 0.0;
                for (std::size_t i = 0; i < m; ++i) proj += std::conj(w(i, c)) * col[i];
                for (std::size_t i = 0; i < m; ++i) col[i] -= proj * w(i, c);
            }
        }
        double norm2 = 0.0;
        for (const auto& x : col) norm2 += std::norm(x);
        if (norm2 <= 1e-8) continue;  // collapsed onto earlier columns
        const double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t i = 0; i < m; ++i) w(i, k) = col[i] * inv;
        filled[k] = true;
    }
    std::size_t next_basis = 0;
    for (std::size_t k = 0; k < m; ++k) {
        if (filled[k]) continue;
        while (true) {
            std::vector<Complex> cand(m, Complex{0.0, 0.0});
            cand[next_basis % m] = 1.0;
            ++next_basis;
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t c = 0; c < m; ++c) {
                    if (!filled[c]) continue;
                    Complex proj = 0.0;
                    for (std::size_t i = 0; i < m; ++i) proj += std::conj(w(i, c)) * cand[i];
                    for (std::size_t i = 0; i < m; ++i) cand[i] -= proj * w(i, c);
                }
            }
            double norm2 = 0.0;
            for (const auto& x : cand) norm2 += std::norm(x);
            if (norm2 > 1e-8) {
                const double inv = 1.0 / std::sqrt(norm2);
                for (std::size_t i = 0; i < m; ++i) w(i, k) = cand[i] * inv;
                filled[k] = true;
                break;
            }
        }
    }

    ComplexMatrix shield_matrix(m, m);
    for (std::size_t k = 0; k < m; ++k) shield_matrix(k, k) = sv[k] / total;
    const QuantumState shield = QuantumState::from_parts(std::move(shield_matrix), shield_factors);
    return {std::move(w), std::move(v), shield};
}

OptResult distance_to_pbit_upper(const QuantumState& s, const OptOptions& opts) {
    validate_options(opts);
    const BlockForm form = blocks(s);
    const std::size_t da = form.shield_dim_alice();
    const std::size_t db = form.shield_dim_bob();
    if (da != db) {
        throw ParameterError("optimizer requires equal Alice and Bob shield dimensions");
    }
    const std::size_t m = form.shield_dim();

    std::optional<PbitParams> best;
    double best_distance = 0.0;
    std::vector<RestartRecord> records;

    for (std::size_t r = 0; r < opts.restarts; ++r) {
        const std::uint64_t seed = Rng::child_seed(opts.base_seed, r);
        Rng rng(seed);

        PbitParams params = r == 0 ? warm_start(s) : random_pbit_params(da, db, seed);
        double distance = pbit_distance(s, params);

        RestartRecord record{seed, distance, {distance}};
        double step = opts.init_step;
        std::size_t rejects = 0;

        for (std::size_t iter = 0; iter < opts.max_iters && step >= opts.stop_step; ++iter) {
            PbitParams proposal{exp_i_hermitian(random_unit_hermitian(m, rng), step) * params.u00,
                                exp_i_hermitian(random_unit_hermitian(m, rng), step) * params.u11,
                                mix_toward_pure(params.shield, step / 4.0, rng)};
            const double candidate = pbit_distance(s, proposal);
            if (candidate < distance) {
                params = std::move(proposal);
                distance = candidate;
                record.accepted.push_back(candidate);
                rejects = 0;
            } else if (++rejects >= opts.decay_after) {
                step *= 0.5;
                rejects = 0;
            }
        }

        record.final_distance = distance;
        if (!best.has_value() || distance < best_distance) {
            best_distance = distance;
            best = std::move(params);
        }
        records.push_back(std::move(record));
    }

    // the reported bound is an independent evaluation at the best parameters
    const double upper = pbit_distance(s, *best);
    return {upper, std::move(*best), std::move(records)};
}

SandwichResult sandwich(const QuantumState& s, const OptOptions& opts,
                        std::optional<std::size_t> hphh_shield_d) {
    const BoundReport report = theorem1_bound(s, hphh_shield_d);
    double lower = report.prop1_lower;
    if (report.theorem1_lower) lower = std::max(lower, *report.theorem1_lower);
    if (report.hphh_lower) lower = std::max(lower, *report.hphh_lower);

    OptResult opt = distance_to_pbit_upper(s, opts);
    if (lower > opt.upper + 1e-9) {
        throw ConsistencyError("analytic lower bound exceeds the optimized upper bound");
    }
    return {lower,
            opt.upper,
            report.prop1_lower,
            report.theorem1_lower,
            report.hphh_lower,
            std::move(opt.best_params),
            std::move(opt.per_restart)};
}

} // namespace pptbound
