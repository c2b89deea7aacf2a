#pragma once

#include <cstddef>

namespace pptbound::tol {

// Single source of truth for numerical tolerances. Tests reference these
// constants instead of repeating literals.

/// Eigensolver residuals, hermiticity and unitarity checks.
inline constexpr double EIG_TOL = 1e-10;

/// Eigenvalue clamping threshold and PSD verdicts (scaled by dimension where noted).
inline constexpr double PSD_TOL = 1e-10;

/// Entrywise equality of reconstructed operators.
inline constexpr double EQ_TOL = 1e-9;

/// Jacobi sweep convergence: off-diagonal Frobenius norm relative to ||H||_F.
inline constexpr double JACOBI_REL_TOL = 1e-13;

/// Hard sweep cap for the Jacobi eigensolver.
inline constexpr std::size_t JACOBI_MAX_SWEEPS = 100;

/// Eigenvalues below this are dropped when computing purification rank.
inline constexpr double RANK_CUTOFF = 1e-14;

} // namespace pptbound::tol
