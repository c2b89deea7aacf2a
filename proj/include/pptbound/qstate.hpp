#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pptbound/linalg.hpp"
#include "pptbound/rng.hpp"

namespace pptbound {

enum class Owner { alice, bob, eve };
enum class Role { key, shield };

/// One tensor factor of a composite system. Factors enumerate
/// most-significant-first: a global index decomposes as
/// sum_f local_f * stride_f with stride_f = prod_{g>f} dim_g.
struct FactorLabel {
    std::size_t dim;
    Owner owner;
    Role role;

    bool operator==(const FactorLabel&) const = default;
};

std::size_t factors_dim(std::span<const FactorLabel> factors);
std::vector<std::size_t> factor_strides(std::span<const FactorLabel> factors);

/// Density matrix with labeled tensor factors. Hermiticity and unit trace are
/// checked on every construction; positivity is checked by checked() and
/// validate() (constructions that guarantee PSD structurally use from_parts).
class QuantumState {
public:
    /// Full validation including the PSD eigensolve.
    static QuantumState checked(ComplexMatrix matrix, std::vector<FactorLabel> factors);

    /// Structural checks only: square, factor dims, Hermitian, unit trace.
    static QuantumState from_parts(ComplexMatrix matrix, std::vector<FactorLabel> factors);

    const ComplexMatrix& matrix() const { return matrix_; }
    const std::vector<FactorLabel>& factors() const { return factors_; }
    std::size_t dim() const { return matrix_.rows(); }

    /// Throws unless all state invariants hold (incl. min eigenvalue >= -PSD_TOL*dim).
    void validate() const;

private:
    QuantumState(ComplexMatrix matrix, std::vector<FactorLabel> factors);

    ComplexMatrix matrix_;
    std::vector<FactorLabel> factors_;
};

/// Hermitian matrix with factor labels but no positivity requirement
/// (partial transposes of states, operator-valued blocks, ...).
struct LabeledMatrix {
    ComplexMatrix matrix;
    std::vector<FactorLabel> factors;
};

/// Normalized state vector over labeled factors.
struct PureState {
    std::vector<Complex> amplitudes;
    std::vector<FactorLabel> factors;
};

QuantumState to_density(const PureState& psi);

/// Spectrum of the partial transpose of a pure bipartite state, plus the
/// sums P and N of positive/negative eigenvalue magnitudes (P - N = 1).
struct PtSpectrum {
    std::vector<double> eigenvalues;  // ascending
    double positive_sum;
    double negative_sum;
};

// Partial transpose over a factor selection. Output is Hermitian and
// trace-preserving but in general not PSD. Default cut: all Bob factors.
LabeledMatrix partial_transpose(const QuantumState& s);
LabeledMatrix partial_transpose(const QuantumState& s, Owner owner);
LabeledMatrix partial_transpose(const QuantumState& s, std::span<const std::size_t> factor_indices);
LabeledMatrix partial_transpose(const LabeledMatrix& m, std::span<const std::size_t> factor_indices);

/// Trace out all factors except `keep` (interpreted as a set; output keeps
/// the original factor order).
QuantumState partial_trace(const QuantumState& s, std::span<const std::size_t> keep);

/// Uhlmann fidelity tr sqrt(sqrt(rho) sigma sqrt(rho)), in [0, 1].
double fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma);
double fidelity(const QuantumState& rho, const QuantumState& sigma);

/// PT eigenvalues of a Schmidt-form pure state: {a_i^2} plus {+-a_i a_j, i<j}.
PtSpectrum pure_pt_spectrum(std::span<const double> schmidt);

/// Sum of |negative eigenvalues| of the Bob-cut partial transpose; zero iff
/// the state is PPT (eigenvalues above -PSD_TOL do not count).
double negativity(const QuantumState& s);

/// Purification with one appended Eve factor of dimension rank(rho)
/// (eigenvalues below RANK_CUTOFF dropped).
PureState purify(const QuantumState& rho);

enum class BellKind { phi_plus, phi_minus, psi_plus, psi_minus };

PureState bell_state(BellKind kind);

/// Projectors onto the symmetric / antisymmetric subspace of C^d x C^d.
ComplexMatrix sym_proj(std::size_t d);
ComplexMatrix antisym_proj(std::size_t d);

/// Normalized projectors as states on an Alice-shield x Bob-shield pair.
QuantumState werner_sym(std::size_t d);
QuantumState werner_antisym(std::size_t d);

/// Haar-distributed unitary (Gaussian matrix orthonormalized with positive
/// diagonal normalization).
ComplexMatrix haar_unitary(std::size_t d, Rng& rng);
ComplexMatrix haar_unitary(std::size_t d, std::uint64_t seed);

/// Random rank-`rank` density matrix (Gaussian Wishart), single Alice factor.
QuantumState random_density(std::size_t d, std::size_t rank, Rng& rng);
QuantumState random_density(std::size_t d, std::size_t rank, std::uint64_t seed);

/// Reorder tensor factors; perm[new_position] = old_index.
QuantumState permute_factors(const QuantumState& s, std::span<const std::size_t> perm);

/// Replace the factor labels (total dimension must be unchanged).
QuantumState with_factors(const QuantumState& s, std::vector<FactorLabel> factors);

} // namespace pptbound
