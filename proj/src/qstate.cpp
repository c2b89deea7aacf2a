#include "pptbound/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace pptbound {

std::size_t factors_dim(std::span<const FactorLabel> factors) {
    std::size_t dim = 1;
    for (const auto& f : factors) dim *= f.dim;
    return dim;
}

std::vector<std::size_t> factor_strides(std::span<const FactorLabel> factors) {
    std::vector<std::size_t> strides(factors.size(), 1);
    for (std::size_t f = factors.size(); f-- > 1;) {
        strides[f - 1] = strides[f] * factors[f].dim;
    }
    return strides;
}

namespace {

void decode_index(std::size_t index, std::span<const FactorLabel> factors,
                  std::span<const std::size_t> strides, std::span<std::size_t> out) {
    for (std::size_t f = 0; f < factors.size(); ++f) {
        out[f] = index / strides[f];
        index %= strides[f];
    }
}

std::size_t encode_index(std::span<const std::size_t> digits,
                         std::span<const std::size_t> strides) {
    std::size_t index = 0;
    for (std::size_t f = 0; f < digits.size(); ++f) index += digits[f] * strides[f];
    return index;
}

void check_structural(const ComplexMatrix& m, const std::vector<FactorLabel>& factors) {
    if (!m.is_square()) throw DimensionError("state matrix must be square");
    for (const auto& f : factors) {
        if (f.dim < 1) throw ParameterError("factor dimension must be at least 1");
    }
    if (factors_dim(factors) != m.rows()) {
        throw DimensionError("factor dimensions do not multiply to matrix size");
    }
    if (hermiticity_residual(m) > tol::EIG_TOL) {
        throw ShapeError("state matrix is not Hermitian within tolerance");
    }
    const Complex tr = mat_trace(m);
    if (std::abs(tr - Complex{1.0, 0.0}) > tol::EIG_TOL) {
        throw NormalizationError("state matrix trace differs from 1 by " +
                                 std::to_string(std::abs(tr - Complex{1.0, 0.0})));
    }
}

std::vector<std::size_t> selected_indices(std::span<const FactorLabel> factors, Owner owner) {
    std::vector<std::size_t> out;
    for (std::size_t f = 0; f < factors.size(); ++f) {
        if (factors[f].owner == owner) out.push_back(f);
    }
    return out;
}

LabeledMatrix pt_impl(const ComplexMatrix& m, const std::vector<FactorLabel>& factors,
                      std::span<const std::size_t> selection) {
    if (selection.empty()) throw SelectorError("partial transpose selection is empty");
    std::set<std::size_t> seen;
    for (std::size_t f : selection) {
        if (f >= factors.size()) {
            throw SelectorError("partial transpose selector out of range: " + std::to_string(f));
        }
        if (!seen.insert(f).second) throw SelectorError("duplicate factor in selector");
    }

    const auto strides = factor_strides(factors);
    const std::size_t n = m.rows();
    const std::size_t nf = factors.size();
    ComplexMatrix out(n, n);
    std::vector<std::size_t> rd(nf), cd(nf);
    for (std::size_t r = 0; r < n; ++r) {
        decode_index(r, factors, strides, rd);
        for (std::size_t c = 0; c < n; ++c) {
            decode_index(c, factors, strides, cd);
            auto rs = rd, cs = cd;
            for (std::size_t f : selection) std::swap(rs[f], cs[f]);
            out(encode_index(rs, strides), encode_index(cs, strides)) = m(r, c);
        }
    }
    return {std::move(out), factors};
}

} // namespace

QuantumState::QuantumState(ComplexMatrix matrix, std::vector<FactorLabel> factors)
    : matrix_(std::move(matrix)), factors_(std::move(factors)) {}

QuantumState QuantumState::from_parts(ComplexMatrix matrix, std::vector<FactorLabel> factors) {
    check_structural(matrix, factors);
    return QuantumState(std::move(matrix), std::move(factors));
}

QuantumState QuantumState::checked(ComplexMatrix matrix, std::vector<FactorLabel> factors) {
    QuantumState s = from_parts(std::move(matrix), std::move(factors));
    s.validate();
    return s;
}

void QuantumState::validate() const {
    check_structural(matrix_, factors_);
    const auto evals = herm_eigvals(matrix_);
    const double floor = -tol::PSD_TOL * static_cast<double>(dim());
    if (evals.front() < floor) {
        throw NotPsdError("state matrix has eigenvalue " + std::to_string(evals.front()));
    }
}

QuantumState to_density(const PureState& psi) {
    const std::size_t n = psi.amplitudes.size();
    double norm2 = 0.0;
    for (const auto& a : psi.amplitudes) norm2 += std::norm(a);
    if (std::abs(norm2 - 1.0) > 1e-12) {
        throw NormalizationError("pure state vector is not normalized");
    }
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = psi.amplitudes[i] * std::conj(psi.amplitudes[j]);
        }
    }
    return QuantumState::from_parts(std::move(m), psi.factors);
}

LabeledMatrix partial_transpose(const QuantumState& s) {
    return partial_transpose(s, Owner::bob);
}

LabeledMatrix partial_transpose(const QuantumState& s, Owner owner) {
    const auto sel = selected_indices(s.factors(), owner);
    return pt_impl(s.matrix(), s.factors(), sel);
}

LabeledMatrix partial_transpose(const QuantumState& s, std::span<const std::size_t> factor_indices) {
    return pt_impl(s.matrix(), s.factors(), factor_indices);
}

LabeledMatrix partial_transpose(const LabeledMatrix& m, std::span<const std::size_t> factor_indices) {
    return pt_impl(m.matrix, m.factors, factor_indices);
}

QuantumState partial_trace(const QuantumState& s, std::span<const std::size_t> keep) {
    if (keep.empty()) throw SelectorError("partial trace keep-set is empty");
    std::set<std::size_t> keep_set;
    for (std::size_t f : keep) {
        if (f >= s.factors().size()) {
            throw SelectorError("partial trace selector out of range: " + std::to_string(f));
        }
        if (!keep_set.insert(f).second) throw SelectorError("duplicate factor in keep-set");
    }

    const auto& factors = s.factors();
    const std::size_t nf = factors.size();
    std::vector<FactorLabel> kept_factors;
    std::vector<std::size_t> kept, traced;
    for (std::size_t f = 0; f < nf; ++f) {
        if (keep_set.contains(f)) {
            kept.push_back(f);
            kept_factors.push_back(factors[f]);
        } else {
            traced.push_back(f);
        }
    }

    const auto strides = factor_strides(factors);
    const auto out_strides = factor_strides(kept_factors);
    const std::size_t out_dim = factors_dim(kept_factors);
    ComplexMatrix out(out_dim, out_dim);

    const std::size_t n = s.dim();
    std::vector<std::size_t> rd(nf), cd(nf), ro(kept.size()), co(kept.size());
    for (std::size_t r = 0; r < n; ++r) {
        decode_index(r, factors, strides, rd);
        for (std::size_t c = 0; c < n; ++c) {
            const Complex v = s.matrix()(r, c);
            if (v == Complex{0.0, 0.0}) continue;
            decode_index(c, factors, strides, cd);
            bool diagonal = true;
            for (std::size_t f : traced) {
                if (rd[f] != cd[f]) {
                    diagonal = false;
                    break;
                }
            }
            if (!diagonal) continue;
            for (std::size_t k = 0; k < kept.size(); ++k) {
                ro[k] = rd[kept[k]];
                co[k] = cd[kept[k]];
            }
            out(encode_index(ro, out_strides), encode_index(co, out_strides)) += v;
        }
    }
    return QuantumState::from_parts(std::move(out), std::move(kept_factors));
}

double fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
        throw DimensionError("fidelity requires equal dimensions");
    }
    const ComplexMatrix root = sqrt_psd(rho);
    const ComplexMatrix inner = root * sigma * root;
    const auto evals = herm_eigvals(inner);
    // sqrt turns O(eps) noise eigenvalues into O(sqrt(eps)) contributions;
    // a relative cutoff keeps the result symmetric in its arguments.
    const double cutoff = 1e-13 * std::max(evals.empty() ? 0.0 : evals.back(), 0.0);
    double sum = 0.0;
    for (double lambda : evals) {
        if (lambda > cutoff) sum += std::sqrt(lambda);
    }
    return std::clamp(sum, 0.0, 1.0);
}

double fidelity(const QuantumState& rho, const QuantumState& sigma) {
    return fidelity(rho.matrix(), sigma.matrix());
}

PtSpectrum pure_pt_spectrum(std::span<const double> schmidt) {
    double sum2 = 0.0;
    for (double a : schmidt) {
        if (a < 0.0) throw NormalizationError("Schmidt coefficients must be non-negative");
        sum2 += a * a;
    }
    if (std::abs(sum2 - 1.0) > tol::EIG_TOL) {
        throw NormalizationError("Schmidt coefficients must have unit square sum");
    }
    PtSpectrum out{{}, 0.0, 0.0};
    for (double a : schmidt) out.eigenvalues.push_back(a * a);
    const std::size_t d = schmidt.size();
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            const double prod = schmidt[i] * schmidt[j];
            out.eigenvalues.push_back(prod);
            out.eigenvalues.push_back(-prod);
        }
    }
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
    for (double lambda : out.eigenvalues) {
        if (lambda >= 0.0) {
            out.positive_sum += lambda;
        } else {
            out.negative_sum -= lambda;
        }
    }
    return out;
}

double negativity(const QuantumState& s) {
    const LabeledMatrix pt = partial_transpose(s);
    double sum = 0.0;
    for (double lambda : herm_eigvals(pt.matrix)) {
        if (lambda < -tol::PSD_TOL) sum -= lambda;
    }
    return sum;
}

PureState purify(const QuantumState& rho) {
    const HermEigResult eig = herm_eig(rho.matrix());
    const std::size_t n = rho.dim();
    std::vector<std::size_t> kept;
    for (std::size_t k = 0; k < n; ++k) {
        if (eig.eigenvalues[k] >= tol::RANK_CUTOFF) kept.push_back(k);
    }
    if (kept.empty()) throw NotPsdError("state has no positive eigenvalues");
    const std::size_t rank = kept.size();

    PureState psi;
    psi.factors = rho.factors();
    psi.factors.push_back({rank, Owner::eve, Role::shield});
    psi.amplitudes.assign(n * rank, Complex{0.0, 0.0});
    for (std::size_t e = 0; e < rank; ++e) {
        const double root = std::sqrt(eig.eigenvalues[kept[e]]);
        for (std::size_t i = 0; i < n; ++i) {
            psi.amplitudes[i * rank + e] = root * eig.eigenvectors(i, kept[e]);
        }
    }
    // renormalize the truncation remainder
    double norm2 = 0.0;
    for (const auto& a : psi.amplitudes) norm2 += std::norm(a);
    const double scale = 1.0 / std::sqrt(norm2);
    for (auto& a : psi.amplitudes) a *= scale;
    return psi;
}

PureState bell_state(BellKind kind) {
    PureState psi;
    psi.factors = {{2, Owner::alice, Role::key}, {2, Owner::bob, Role::key}};
    psi.amplitudes.assign(4, Complex{0.0, 0.0});
    const double inv = 1.0 / std::sqrt(2.0);
    switch (kind) {
        case BellKind::phi_plus:
            psi.amplitudes[0] = inv;
            psi.amplitudes[3] = inv;
            break;
        case BellKind::phi_minus:
            psi.amplitudes[0] = inv;
            psi.amplitudes[3] = -inv;
            break;
        case BellKind::psi_plus:
            psi.amplitudes[1] = inv;
            psi.amplitudes[2] = inv;
            break;
        case BellKind::psi_minus:
            psi.amplitudes[1] = inv;
            psi.amplitudes[2] = -inv;
            break;
    }
    return psi;
}

namespace {

ComplexMatrix swap_matrix(std::size_t d) {
    ComplexMatrix m(d * d, d * d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) m(i * d + j, j * d + i) = 1.0;
    }
    return m;
}

} // namespace

ComplexMatrix sym_proj(std::size_t d) {
    if (d < 2) throw DimensionError("sym_proj requires d >= 2");
    ComplexMatrix m = swap_matrix(d);
    m += ComplexMatrix::identity(d * d);
    m *= Complex{0.5, 0.0};
    return m;
}

ComplexMatrix antisym_proj(std::size_t d) {
    if (d < 2) throw DimensionError("antisym_proj requires d >= 2");
    ComplexMatrix m = ComplexMatrix::identity(d * d);
    m -= swap_matrix(d);
    m *= Complex{0.5, 0.0};
    return m;
}

QuantumState werner_sym(std::size_t d) {
    const double dd = static_cast<double>(d);
    ComplexMatrix m = 2.0 / (dd * dd + dd) * sym_proj(d);
    return QuantumState::from_parts(
        std::move(m), {{d, Owner::alice, Role::shield}, {d, Owner::bob, Role::shield}});
}

QuantumState werner_antisym(std::size_t d) {
    const double dd = static_cast<double>(d);
    ComplexMatrix m = 2.0 / (dd * dd - dd) * antisym_proj(d);
    return QuantumState::from_parts(
        std::move(m), {{d, Owner::alice, Role::shield}, {d, Owner::bob, Role::shield}});
}

ComplexMatrix haar_unitary(std::size_t d, Rng& rng) {
    if (d < 1) throw ParameterError("haar_unitary requires d >= 1");
    ComplexMatrix g(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) g(i, j) = rng.cnormal();
    }
    // Modified Gram-Schmidt with one re-orthogonalization pass. Positive
    // normalization makes the implied R diagonal positive, so Q is Haar.
    for (std::size_t j = 0; j < d; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < j; ++k) {
                Complex proj = 0.0;
                for (std::size_t i = 0; i < d; ++i) proj += std::conj(g(i, k)) * g(i, j);
                for (std::size_t i = 0; i < d; ++i) g(i, j) -= proj * g(i, k);
            }
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < d; ++i) norm += std::norm(g(i, j));
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < d; ++i) g(i, j) /= norm;
    }
    return g;
}

ComplexMatrix haar_unitary(std::size_t d, std::uint64_t seed) {
    Rng rng(seed);
    return haar_unitary(d, rng);
}

QuantumState random_density(std::size_t d, std::size_t rank, Rng& rng) {
    if (rank < 1 || rank > d) throw ParameterError("random_density rank out of range");
    ComplexMatrix b(d, rank);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < rank; ++j) b(i, j) = rng.cnormal();
    }
    ComplexMatrix rho = b * dagger(b);
    rho *= Complex{1.0 / mat_trace(rho).real(), 0.0};
    return QuantumState::from_parts(std::move(rho), {{d, Owner::alice, Role::shield}});
}

QuantumState random_density(std::size_t d, std::size_t rank, std::uint64_t seed) {
    Rng rng(seed);
    return random_density(d, rank, rng);
}

QuantumState permute_factors(const QuantumState& s, std::span<const std::size_t> perm) {
    const auto& factors = s.factors();
    const std::size_t nf = factors.size();
    if (perm.size() != nf) throw ParameterError("permutation length mismatch");
    std::vector<bool> used(nf, false);
    for (std::size_t f : perm) {
        if (f >= nf || used[f]) throw ParameterError("permutation is not a bijection");
        used[f] = true;
    }

    std::vector<FactorLabel> new_factors(nf);
    for (std::size_t p = 0; p < nf; ++p) new_factors[p] = factors[perm[p]];

    const auto strides = factor_strides(factors);
    const auto new_strides = factor_strides(new_factors);
    const std::size_t n = s.dim();
    ComplexMatrix out(n, n);
    std::vector<std::size_t> rd(nf), cd(nf), rn(nf), cn(nf);
    for (std::size_t r = 0; r < n; ++r) {
        decode_index(r, factors, strides, rd);
        for (std::size_t c = 0; c < n; ++c) {
            const Complex v = s.matrix()(r, c);
            if (v == Complex{0.0, 0.0}) continue;
            decode_index(c, factors, strides, cd);
            for (std::size_t p = 0; p < nf; ++p) {
                rn[p] = rd[perm[p]];
                cn[p] = cd[perm[p]];
            }
            out(encode_index(rn, new_strides), encode_index(cn, new_strides)) = v;
        }
    }
    return QuantumState::from_parts(std::move(out), std::move(new_factors));
}

QuantumState with_factors(const QuantumState& s, std::vector<FactorLabel> factors) {
    return QuantumState::from_parts(s.matrix(), std::move(factors));
}

} // namespace pptbound
