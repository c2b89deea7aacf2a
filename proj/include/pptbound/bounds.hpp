#pragma once

#include <cstdint>
#include <optional>

#include "pptbound/pbit.hpp"
#include "pptbound/qstate.hpp"

namespace pptbound {

struct PptVerdict {
    bool ppt;
    double min_eigenvalue;
};

/// Partial transpose over all Bob factors; PPT iff the smallest eigenvalue
/// is at least -tolerance * dimension.
PptVerdict is_ppt(const QuantumState& s, double tolerance = tol::PSD_TOL);

/// Project onto the Bell-diagonal block form: key-diagonal blocks are
/// averaged pairwise, the corner becomes the Hermitian part of A_0011, and
/// every other block is zeroed. Trace-preserving, idempotent, PPT-preserving,
/// and the corner is untouched whenever it is already Hermitian.
QuantumState bell_twirl(const QuantumState& s);

/// Operator weights of a Bell-diagonal block state. sigma3 is present only
/// for four-Bell-block states (distinct psi+ / psi- weights).
struct SigmaBlocks {
    ComplexMatrix sigma0;
    ComplexMatrix sigma1;
    ComplexMatrix sigma2;
    std::optional<ComplexMatrix> sigma3;
};

/// Recover the sigma weights; throws ShapeError unless the state is in
/// Bell-diagonal block form within tolerance. Rebuilding the block matrix
/// from the result reproduces the input within 1e-10.
SigmaBlocks sigma_blocks(const QuantumState& s);

struct Lemma1Result {
    double lhs;     // ||sigma0 - sigma1||_1
    double rhs;     // 1 - 1/(d+1)
    double margin;  // rhs - lhs, >= -1e-9 for every PPT input
};

/// Dimension-dependent bound on ||sigma0 - sigma1|| for PPT states in
/// Bell-diagonal block form. Throws PreconditionError if the state is not PPT.
Lemma1Result lemma1_check(const QuantumState& s);

struct Margins {
    std::optional<double> lemma1;
    std::optional<double> theorem1;
    std::optional<double> hphh;
};

/// Everything the verifiers can say about one state instance.
struct BoundReport {
    std::vector<FactorLabel> dims;
    bool is_ppt = false;
    double min_pt_eigenvalue = 0.0;
    bool a0011_hermitian = false;
    double a0011_norm = 0.0;
    double prop1_lower = 0.0;
    std::optional<double> theorem1_lower;  // 1/(2(d+1)) when applicable
    std::optional<double> hphh_lower;      // 1/(2(sqrt d + 1)) for family instances
    std::optional<double> lemma1_lhs;
    std::optional<double> lemma1_rhs;
    Margins margins;
};

/// Full report: PPT verdict, corner-block data, the distance lower bound
/// 1/(2(d+1)) when the state is PPT with Hermitian corner and equal shield
/// dimensions, and the Bell-diagonal bound (after twirling if necessary).
/// `hphh_shield_d` marks family instances whose sqrt(d) bound applies.
BoundReport theorem1_bound(const QuantumState& s,
                           std::optional<std::size_t> hphh_shield_d = std::nullopt);

/// Distance lower bound 1/(2(sqrt d + 1)) of the PT-invariant family.
double hphh_bound(std::size_t d);

/// Rejection-sample a PPT Bell-diagonal block state with shield pair
/// (d_shield, d_shield). Deterministic in the seed.
QuantumState sample_ppt_belldia(std::size_t d_shield, std::uint64_t seed,
                                std::size_t max_attempts = 1000);

} // namespace pptbound
