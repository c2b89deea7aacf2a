#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "pptbound/qstate.hpp"

namespace pptbound {

/// Constructors reject states larger than this by default.
inline constexpr std::size_t DEFAULT_DIM_CAP = 4096;

/// Parameters of the Werner-pair key-correlated family: local dimension d,
/// Werner tensor power l, outer tensor power m, mixing weight p in [0, 1/2).
struct HhhoParams {
    std::size_t d;
    std::size_t l;
    std::size_t m;
    double p;
};

/// Block-matrix family built from tensor powers of symmetric/antisymmetric
/// Werner states, normalized by 2(2p)^m + 2(1-2p)^m. Shield factors are
/// regrouped to canonical (A, B, Alice-shields, Bob-shields) order.
QuantumState hhho_state(const HhhoParams& params, std::size_t dim_cap = DEFAULT_DIM_CAP);

/// Mixing weight p = (1 - 2(q+r)) / (4 + 2 sqrt(2)) of the class-A states.
double cckkl_a_weight(double q, double r);

/// 16-dimensional class-A state; requires q > 0, r > 0, q + r < (2-sqrt2)/8.
QuantumState cckkl_a_state(double q, double r);

/// n-fold block tensor power of the class-A sigma blocks with shield
/// dimensions (2^n, 2^n), normalized to unit trace.
QuantumState cckkl_a_power(double q, double r, std::size_t n,
                           std::size_t dim_cap = DEFAULT_DIM_CAP);

/// Normalization constant printed alongside the power construction; differs
/// from the exact unit-trace constant whenever q + r > 0.
double cckkl_a_power_norm_literal(double q, double r, std::size_t n);

/// Exact unit-trace normalization 2(4p)^n + 2(2 sqrt2 p + 2q + 2r)^n.
double cckkl_a_power_norm_exact(double q, double r, std::size_t n);

/// Four-Bell-block class-B state; requires 0 < q < (2-sqrt2)/8. The optional
/// basis must be an orthonormal pair spanning span{|01>, |10>}; the default
/// is (|01> +- |10>)/sqrt2.
QuantumState cckkl_b_state(double q,
                           std::optional<std::array<std::vector<Complex>, 2>> x_basis = {});

/// W_U = sum_ij u_ij |ij><ji| on C^d x C^d for a unitary U.
ComplexMatrix w_u(const ComplexMatrix& u);

/// Derived data of the partial-transpose-invariant family: w_norm = sum |u_ij|
/// and p = w_norm / (w_norm + d).
struct HphhParams {
    ComplexMatrix unitary;
    double w_norm;
    double p;
};

HphhParams hphh_params(const ComplexMatrix& u);

/// PT-invariant PPT state built from W_U; dimension 4 d^4.
QuantumState hphh_from_unitary(const ComplexMatrix& u, std::size_t dim_cap = DEFAULT_DIM_CAP);

/// General member of the family for arbitrary trace-norm-one operators X1,
/// X2 on a (d x d)-shield and p in [0, 1]. Positivity of the assembled
/// matrix is checked, not assumed.
QuantumState hphh_general(const ComplexMatrix& x1, const ComplexMatrix& x2, double p);

/// h(p) = -p log2 p - (1-p) log2(1-p), with h(0) = h(1) = 0.
double binary_entropy(double p);

struct KeyRateBound {
    double raw;      // 1 - h(p)
    double clamped;  // max(0, raw)
};

/// Distillable-key-rate lower bound 1 - h(p) for the family instance.
KeyRateBound hphh_key_rate_lower(const HphhParams& params);

/// Discrete Fourier unitary, entries omega^{jk} / sqrt(d).
ComplexMatrix fourier_unitary(std::size_t d);

} // namespace pptbound
