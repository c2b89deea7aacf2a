#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "pptbound/errors.hpp"
#include "pptbound/tolerances.hpp"

namespace pptbound {

using Complex = std::complex<double>;

/// Dense row-major complex matrix. Immutable by convention once built: every
/// operation below returns a fresh value.
class ComplexMatrix {
public:
    ComplexMatrix(std::size_t rows, std::size_t cols);

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<Complex> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const Complex> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    std::span<const Complex> data() const { return data_; }

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(Complex scale);

    double frobenius_norm() const;
    double max_abs() const;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Complex> data_;
};

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex scale, const ComplexMatrix& m);
ComplexMatrix operator*(double scale, const ComplexMatrix& m);

/// Conjugate transpose.
ComplexMatrix dagger(const ComplexMatrix& m);

/// Sum of the diagonal; requires a square matrix.
Complex mat_trace(const ComplexMatrix& m);

/// Kronecker product; entry ((i*rB+k),(j*cB+l)) = A(i,j)*B(k,l).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// max_ij |a_ij - b_ij|; requires equal shapes.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// max_ij |m_ij - conj(m_ji)|.
double hermiticity_residual(const ComplexMatrix& m);

struct HermEigResult {
    std::vector<double> eigenvalues;  // ascending; ties keep original index order
    ComplexMatrix eigenvectors;       // column k pairs with eigenvalue k
};

/// Full eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations
/// (off-diagonal Frobenius threshold JACOBI_REL_TOL * ||H||_F, at most
/// JACOBI_MAX_SWEEPS sweeps). The input is symmetrized before solving; inputs
/// with hermiticity residual above EIG_TOL are rejected.
HermEigResult herm_eig(const ComplexMatrix& h);

/// Eigenvalues only, same algorithm and ordering as herm_eig.
std::vector<double> herm_eigvals(const ComplexMatrix& h);

/// Singular values, descending; sqrt of the largest min(rows, cols)
/// eigenvalues of M†M with negatives clamped to zero.
std::vector<double> singular_values(const ComplexMatrix& m);

/// tr sqrt(M†M), the sum of singular values; requires a square matrix.
double trace_norm(const ComplexMatrix& m);

/// Hermitian PSD square root; eigenvalues below -PSD_TOL are rejected,
/// small negatives are clamped to zero.
ComplexMatrix sqrt_psd(const ComplexMatrix& h);

} // namespace pptbound
