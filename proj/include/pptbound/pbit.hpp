#pragma once

#include <cstdint>

#include "pptbound/qstate.hpp"

namespace pptbound {

/// Parameters of a private state: twisting unitaries for the two key
/// outcomes plus the shield state, all on A'B'.
struct PbitParams {
    ComplexMatrix u00;
    ComplexMatrix u11;
    QuantumState shield;
};

/// 4x4 grid of operator blocks of a state whose first two factors are the
/// 2-dimensional key factors. Grid index 0..3 enumerates the key basis
/// |00>, |01>, |10>, |11>.
class BlockForm {
public:
    BlockForm(std::vector<ComplexMatrix> blocks, std::vector<FactorLabel> key_factors,
              std::vector<FactorLabel> shield_factors);

    const ComplexMatrix& block(std::size_t row, std::size_t col) const {
        return blocks_[row * 4 + col];
    }
    ComplexMatrix& block(std::size_t row, std::size_t col) { return blocks_[row * 4 + col]; }

    const std::vector<FactorLabel>& key_factors() const { return key_factors_; }
    const std::vector<FactorLabel>& shield_factors() const { return shield_factors_; }

    std::size_t shield_dim() const;        // product of all non-key factor dims
    std::size_t shield_dim_alice() const;  // product of Alice-owned shield dims
    std::size_t shield_dim_bob() const;    // product of Bob-owned shield dims

private:
    std::vector<ComplexMatrix> blocks_;  // row-major 4x4
    std::vector<FactorLabel> key_factors_;
    std::vector<FactorLabel> shield_factors_;
};

/// Probability and Eve-distinguishability data behind the key-correlation
/// identity ||A_0011|| = sqrt(p00 p11) F.
struct KeyCorrelation {
    double p00;
    double p11;
    double eve_fidelity;
    double product;
};

/// Throws ParameterError unless the unitaries are unitary within EIG_TOL and
/// match the shield dimension.
void validate_pbit_params(const PbitParams& params);

/// gamma = 1/2 sum_{k,l} |kk><ll| (x) U_kk rho U_ll†.
QuantumState make_pbit(const PbitParams& params);

/// Decompose a state with canonical key factors into its 4x4 block grid.
BlockForm blocks(const QuantumState& s);

/// Inverse of blocks(); reproduces the source state bit-exactly.
QuantumState reassemble(const BlockForm& form);

/// Trace norm of the upper-right block A_0011; equals 1/2 exactly for
/// private states and is at most 1/2 for any state.
double a0011_norm(const QuantumState& s);

/// max(0, 1/2 - ||A_0011||): a lower bound on the trace-norm distance from s
/// to every private state of matching dimensions.
double prop1_lower_bound(const QuantumState& s);

/// Measurement probabilities p_ii = tr A_iiii and the fidelity of Eve's
/// conditional states from a purification; product must reproduce
/// a0011_norm within 1e-8. Throws DegenerateOutcomeError if p00 or p11
/// vanishes (below 1e-12).
KeyCorrelation key_correlation(const QuantumState& s);

/// True iff p00, p11 and ||A_0011|| are all within tol of 1/2.
bool is_pbit(const QuantumState& s, double tolerance);

/// Haar-random twisting unitaries and a full-rank random shield on a
/// (d_alice x d_bob) shield pair.
PbitParams random_pbit_params(std::size_t d_alice, std::size_t d_bob, std::uint64_t seed);

} // namespace pptbound
