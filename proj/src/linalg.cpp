#include "pptbound/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace pptbound {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {
    if (rows == 0 || cols == 0) {
        throw DimensionError("matrix dimensions must be at least 1x1");
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw DimensionError("matrix addition requires equal shapes");
    }
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw DimensionError("matrix subtraction requires equal shapes");
    }
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
    for (auto& v : data_) v *= scale;
    return *this;
}

double ComplexMatrix::frobenius_norm() const {
    double sum = 0.0;
    for (const auto& v : data_) sum += std::norm(v);
    return std::sqrt(sum);
}

double ComplexMatrix::max_abs() const {
    double best = 0.0;
    for (const auto& v : data_) best = std::max(best, std::abs(v));
    return best;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out = a;
    out += b;
    return out;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out = a;
    out -= b;
    return out;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matrix product: inner dimensions disagree");
    }
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{0.0, 0.0}) continue;
            const auto brow = b.row(k);
            auto orow = out.row(i);
            for (std::size_t j = 0; j < b.cols(); ++j) orow[j] += aik * brow[j];
        }
    }
    return out;
}

ComplexMatrix operator*(Complex scale, const ComplexMatrix& m) {
    ComplexMatrix out = m;
    out *= scale;
    return out;
}

ComplexMatrix operator*(double scale, const ComplexMatrix& m) {
    return Complex{scale, 0.0} * m;
}

ComplexMatrix dagger(const ComplexMatrix& m) {
    ComplexMatrix out(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = std::conj(m(i, j));
    }
    return out;
}

Complex mat_trace(const ComplexMatrix& m) {
    if (!m.is_square()) throw DimensionError("trace requires a square matrix");
    Complex sum = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) sum += m(i, i);
    return sum;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex{0.0, 0.0}) continue;
            for (std::size_t k = 0; k < b.rows(); ++k) {
                for (std::size_t l = 0; l < b.cols(); ++l) {
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
                }
            }
        }
    }
    return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("max_abs_diff requires equal shapes");
    }
    double best = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            best = std::max(best, std::abs(a(i, j) - b(i, j)));
        }
    }
    return best;
}

double hermiticity_residual(const ComplexMatrix& m) {
    if (!m.is_square()) throw DimensionError("hermiticity_residual requires a square matrix");
    double best = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = i; j < m.cols(); ++j) {
            best = std::max(best, std::abs(m(i, j) - std::conj(m(j, i))));
        }
    }
    return best;
}

namespace {

// Union-find over the exact nonzero pattern. Structural zeros stay exact
// under symmetrization, so splitting into connected components is a
// permutation similarity, not an approximation.
class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

struct ComponentEig {
    std::vector<double> values;               // per diagonal slot of the component
    std::vector<std::vector<Complex>> vectors; // column per slot, component-local
};

// Cyclic Jacobi on one Hermitian component, in place. `scale` is the
// Frobenius norm of the full input matrix so accuracy matches the unsplit
// solve. `want_vectors` toggles accumulation of the rotations.
ComponentEig jacobi_component(ComplexMatrix h, double scale, bool want_vectors) {
    const std::size_t n = h.rows();
    ComponentEig out;
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double conv = tol::JACOBI_REL_TOL * scale;
    // A sweep that skips every pivot certifies off_F <= conv.
    const double skip2 = n > 1 ? conv * conv / static_cast<double>(n * (n - 1)) : 0.0;

    bool converged = n <= 1;
    for (std::size_t sweep = 0; !converged && sweep < tol::JACOBI_MAX_SWEEPS; ++sweep) {
        double off2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) off2 += 2.0 * std::norm(h(i, j));
        }
        if (off2 <= conv * conv) {
            converged = true;
            break;
        }

        bool rotated = false;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex hpq = h(p, q);
                const double mag2 = std::norm(hpq);
                if (mag2 <= skip2) continue;
                rotated = true;

                const double mag = std::sqrt(mag2);
                const Complex phase = hpq / mag;  // e^{i phi}
                const double app = h(p, p).real();
                const double aqq = h(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                auto hp = h.row(p);
                auto hq = h.row(q);
                const Complex sp = s * phase;          // s e^{i phi}
                const Complex spc = std::conj(sp);     // s e^{-i phi}
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const Complex hpk = hp[k];
                    const Complex hqk = hq[k];
                    hp[k] = c * hpk - sp * hqk;
                    hq[k] = s * hpk + (c * phase) * hqk;
                    h(k, p) = std::conj(hp[k]);
                    h(k, q) = std::conj(hq[k]);
                }
                const double delta = t * mag;  // closed-form diagonal shift
                h(p, p) = app - delta;
                h(q, q) = aqq + delta;
                h(p, q) = 0.0;
                h(q, p) = 0.0;

                if (want_vectors) {
                    for (std::size_t k = 0; k < n; ++k) {
                        auto vrow = v.row(k);
                        const Complex vkp = vrow[p];
                        const Complex vkq = vrow[q];
                        vrow[p] = c * vkp - spc * vkq;
                        vrow[q] = s * vkp + (c * std::conj(phase)) * vkq;
                    }
                }
            }
        }
        if (!rotated) converged = true;  // every pivot below the skip threshold
    }
    if (!converged) throw ConvergenceError("jacobi eigensolver failed to converge");

    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = h(i, i).real();
    if (want_vectors) {
        out.vectors.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            out.vectors[j].resize(n);
            for (std::size_t i = 0; i < n; ++i) out.vectors[j][i] = v(i, j);
        }
    }
    return out;
}

struct EigPair {
    double value;
    std::size_t origin;  // global diagonal slot, breaks sort ties
    const std::vector<Complex>* vec;
    const std::vector<std::size_t>* members;
};

HermEigResult herm_eig_impl(const ComplexMatrix& input, bool want_vectors) {
    if (!input.is_square()) throw DimensionError("herm_eig requires a square matrix");
    const std::size_t n = input.rows();
    if (hermiticity_residual(input) > tol::EIG_TOL) {
        throw ShapeError("herm_eig input is not Hermitian within tolerance");
    }

    ComplexMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        h(i, i) = Complex{input(i, i).real(), 0.0};
        for (std::size_t j = i + 1; j < n; ++j) {
            const Complex sym = 0.5 * (input(i, j) + std::conj(input(j, i)));
            h(i, j) = sym;
            h(j, i) = std::conj(sym);
        }
    }
    const double scale = h.frobenius_norm();

    DisjointSets sets(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (h(i, j) != Complex{0.0, 0.0}) sets.unite(i, j);
        }
    }
    std::vector<std::vector<std::size_t>> components(n);
    for (std::size_t i = 0; i < n; ++i) components[sets.find(i)].push_back(i);

    std::vector<ComponentEig> solved;
    std::vector<std::vector<std::size_t>> member_lists;
    for (auto& members : components) {
        if (members.empty()) continue;
        const std::size_t m = members.size();
        ComplexMatrix sub(m, m);
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t b = 0; b < m; ++b) sub(a, b) = h(members[a], members[b]);
        }
        solved.push_back(jacobi_component(std::move(sub), scale, want_vectors));
        member_lists.push_back(std::move(members));
    }

    std::vector<EigPair> pairs;
    pairs.reserve(n);
    for (std::size_t c = 0; c < solved.size(); ++c) {
        for (std::size_t k = 0; k < solved[c].values.size(); ++k) {
            pairs.push_back({solved[c].values[k], member_lists[c][k],
                             want_vectors ? &solved[c].vectors[k] : nullptr,
                             &member_lists[c]});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const EigPair& a, const EigPair& b) {
        if (a.value != b.value) return a.value < b.value;
        return a.origin < b.origin;
    });

    HermEigResult result{std::vector<double>(n), ComplexMatrix(n, want_vectors ? n : 1)};
    for (std::size_t k = 0; k < n; ++k) result.eigenvalues[k] = pairs[k].value;
    if (want_vectors) {
        ComplexMatrix vecs(n, n);
        for (std::size_t k = 0; k < n; ++k) {
            const auto& members = *pairs[k].members;
            const auto& local = *pairs[k].vec;
            for (std::size_t a = 0; a < members.size(); ++a) vecs(members[a], k) = local[a];
        }
        result.eigenvectors = std::move(vecs);
    }
    return result;
}

} // namespace

HermEigResult herm_eig(const ComplexMatrix& h) { return herm_eig_impl(h, true); }

std::vector<double> herm_eigvals(const ComplexMatrix& h) {
    return herm_eig_impl(h, false).eigenvalues;
}

std::vector<double> singular_values(const ComplexMatrix& m) {
    const ComplexMatrix gram = dagger(m) * m;
    std::vector<double> evals = herm_eigvals(gram);  // ascending
    const std::size_t count = std::min(m.rows(), m.cols());
    std::vector<double> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double lambda = evals[evals.size() - 1 - k];
        out.push_back(lambda > 0.0 ? std::sqrt(lambda) : 0.0);
    }
    return out;
}

double trace_norm(const ComplexMatrix& m) {
    if (!m.is_square()) throw DimensionError("trace_norm requires a square matrix");
    // Hermitian inputs: sum |eigenvalue|, avoiding the squared conditioning
    // of the Gram route. The dispatch threshold keeps both routes within
    // the documented agreement tolerance.
    const double scale = std::max(1.0, m.max_abs());
    if (hermiticity_residual(m) <= 1e-13 * scale) {
        double sum = 0.0;
        for (double lambda : herm_eigvals(m)) sum += std::abs(lambda);
        return sum;
    }
    double sum = 0.0;
    for (double s : singular_values(m)) sum += s;
    return sum;
}

ComplexMatrix sqrt_psd(const ComplexMatrix& h) {
    const HermEigResult eig = herm_eig(h);
    const std::size_t n = h.rows();
    for (double lambda : eig.eigenvalues) {
        if (lambda < -tol::PSD_TOL) {
            throw NotPsdError("sqrt_psd input has eigenvalue " + std::to_string(lambda));
        }
    }
    ComplexMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double s = eig.eigenvalues[k] > 0.0 ? std::sqrt(eig.eigenvalues[k]) : 0.0;
        if (s == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const Complex vik = eig.eigenvectors(i, k);
            if (vik == Complex{0.0, 0.0}) continue;
            const Complex scaled = s * vik;
            for (std::size_t j = 0; j < n; ++j) {
                out(i, j) += scaled * std::conj(eig.eigenvectors(j, k));
            }
        }
    }
    return out;
}

} // namespace pptbound
