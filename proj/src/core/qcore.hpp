#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace dicke {

using cplx = std::complex<double>;

/// Dense row-major complex matrix; the only matrix representation used
/// anywhere (dimensions never exceed 16).
struct ComplexMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<cplx> data;

  ComplexMatrix() = default;
  ComplexMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

  cplx& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const {
    return data[i * cols + j];
  }
};

ComplexMatrix identity(std::size_t n);
ComplexMatrix zeros(std::size_t n);

// Pauli matrices and the 2x2 identity.
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, const ComplexMatrix& a);

ComplexMatrix dagger(const ComplexMatrix& a);
cplx trace(const ComplexMatrix& a);

/// Largest entrywise |a - b|; matrices must have equal shape.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol);

/// Largest entrywise |a - a^dagger| (0 for exactly Hermitian input).
double hermiticity_defect(const ComplexMatrix& a);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Trace-one Hermitian matrix on n qubits. Physical states are PSD as
/// well; pseudostates reuse the same carrier with require_psd = false.
struct DensityMatrix {
  ComplexMatrix matrix;
  int n_qubits = 0;
};

/// Validates Hermiticity (1e-10), unit trace (1e-10) and, when requested,
/// positivity (min eigenvalue >= -1e-9). Throws NonHermitianInput /
/// DimensionMismatch on violation.
DensityMatrix make_density(ComplexMatrix m, int n_qubits, bool require_psd = true);

struct EigResult {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // columns, same order as values
};

/// Eigenvalues of a Hermitian matrix (ascending), by cyclic complex Jacobi
/// rotations driven to off-diagonal norm < 1e-12. Input must be Hermitian
/// within 1e-8.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

/// As above but also accumulates the eigenvectors.
EigResult hermitian_eig(const ComplexMatrix& m);

/// Transposes the indices of the qubits flagged in the mask. The mask must
/// have one entry per qubit.
ComplexMatrix partial_transpose(const DensityMatrix& rho,
                                const std::vector<bool>& transpose_mask);

/// True iff the minimum eigenvalue is >= -tol. Input must be Hermitian.
bool is_psd(const ComplexMatrix& m, double tol);

inline constexpr double kPsdTol = 1e-9;

}  // namespace dicke
