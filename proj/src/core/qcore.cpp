#include "qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "errors.hpp"

namespace dicke {

ComplexMatrix identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix zeros(std::size_t n) { return ComplexMatrix(n, n); }

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m(0, 1) = cplx(0.0, -1.0);
  m(1, 0) = cplx(0.0, 1.0);
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

static void check_same_shape(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw DimensionMismatch("matrix shapes differ");
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_same_shape(a, b);
  ComplexMatrix r(a.rows, a.cols);
  for (std::size_t i = 0; i < a.data.size(); ++i) r.data[i] = a.data[i] + b.data[i];
  return r;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_same_shape(a, b);
  ComplexMatrix r(a.rows, a.cols);
  for (std::size_t i = 0; i < a.data.size(); ++i) r.data[i] = a.data[i] - b.data[i];
  return r;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols != b.rows) throw DimensionMismatch("inner dimensions differ");
  ComplexMatrix r(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < b.cols; ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

ComplexMatrix operator*(cplx s, const ComplexMatrix& a) {
  ComplexMatrix r(a.rows, a.cols);
  for (std::size_t i = 0; i < a.data.size(); ++i) r.data[i] = s * a.data[i];
  return r;
}

ComplexMatrix dagger(const ComplexMatrix& a) {
  ComplexMatrix r(a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) r(j, i) = std::conj(a(i, j));
  return r;
}

cplx trace(const ComplexMatrix& a) {
  cplx t = 0.0;
  const std::size_t n = std::min(a.rows, a.cols);
  for (std::size_t i = 0; i < n; ++i) t += a(i, i);
  return t;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_same_shape(a, b);
  double d = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    d = std::max(d, std::abs(a.data[i] - b.data[i]));
  return d;
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.rows != b.rows || a.cols != b.cols) return false;
  return max_abs_diff(a, b) <= tol;
}

double hermiticity_defect(const ComplexMatrix& a) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j)
      d = std::max(d, std::abs(a(i, j) - std::conj(a(j, i))));
  return d;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix r(a.rows * b.rows, a.cols * b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx{}) continue;
      for (std::size_t k = 0; k < b.rows; ++k)
        for (std::size_t l = 0; l < b.cols; ++l)
          r(i * b.rows + k, j * b.cols + l) = aij * b(k, l);
    }
  return r;
}

DensityMatrix make_density(ComplexMatrix m, int n_qubits, bool require_psd) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (m.rows != dim || m.cols != dim)
    throw DimensionMismatch("density matrix dimension does not match qubit count");
  if (hermiticity_defect(m) > 1e-10)
    throw NonHermitianInput("density matrix not Hermitian within 1e-10");
  if (std::abs(trace(m) - 1.0) > 1e-10)
    throw Error("density matrix trace differs from 1");
  if (require_psd && !is_psd(m, kPsdTol))
    throw Error("density matrix has a negative eigenvalue beyond tolerance");
  return DensityMatrix{std::move(m), n_qubits};
}

// Cyclic complex Jacobi. One rotation zeroes A(p,q); sweeps repeat until
// the off-diagonal Frobenius norm drops below 1e-12.
static EigResult jacobi_eig(ComplexMatrix a, bool want_vectors) {
  const std::size_t n = a.rows;
  ComplexMatrix v = want_vectors ? identity(n) : ComplexMatrix();

  auto off_norm = [&a, n]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * std::norm(a(i, j));
    return std::sqrt(s);
  };

  const int max_sweeps = 80;
  for (int sweep = 0; sweep < max_sweeps && off_norm() >= 1e-12; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx g = a(p, q);
        const double ag = std::abs(g);
        if (ag < 1e-300) continue;
        const cplx u = g / ag;  // phase of the pivot
        const double alpha = a(p, p).real();
        const double beta = a(q, q).real();
        const double tau = (beta - alpha) / (2.0 * ag);
        const double t = (tau >= 0.0)
                             ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                             : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx su = s * u;

        // A <- J^dagger A J with the rotation in the (p,q) plane.
        for (std::size_t i = 0; i < n; ++i) {
          if (i == p || i == q) continue;
          const cplx aip = a(i, p);
          const cplx aiq = a(i, q);
          a(i, p) = c * aip - std::conj(su) * aiq;
          a(i, q) = su * aip + c * aiq;
          a(p, i) = std::conj(a(i, p));
          a(q, i) = std::conj(a(i, q));
        }
        a(p, p) = alpha - t * ag;
        a(q, q) = beta + t * ag;
        a(p, q) = 0.0;
        a(q, p) = 0.0;

        if (want_vectors) {
          for (std::size_t i = 0; i < n; ++i) {
            const cplx vip = v(i, p);
            const cplx viq = v(i, q);
            v(i, p) = c * vip - std::conj(su) * viq;
            v(i, q) = su * vip + c * viq;
          }
        }
      }
    }
  }

  EigResult res;
  res.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) res.values[i] = a(i, i).real();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&res](std::size_t i, std::size_t j) { return res.values[i] < res.values[j]; });

  std::vector<double> sorted(n);
  for (std::size_t i = 0; i < n; ++i) sorted[i] = res.values[order[i]];
  res.values = std::move(sorted);

  if (want_vectors) {
    res.vectors = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) res.vectors(i, j) = v(i, order[j]);
  }
  return res;
}

static void require_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows != m.cols) throw DimensionMismatch("eigensolver needs a square matrix");
  if (hermiticity_defect(m) > tol)
    throw NonHermitianInput("matrix not Hermitian within tolerance");
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  require_hermitian(m, 1e-8);
  return jacobi_eig(m, false).values;
}

EigResult hermitian_eig(const ComplexMatrix& m) {
  require_hermitian(m, 1e-8);
  return jacobi_eig(m, true);
}

ComplexMatrix partial_transpose(const DensityMatrix& rho,
                                const std::vector<bool>& transpose_mask) {
  const int n = rho.n_qubits;
  if (static_cast<int>(transpose_mask.size()) != n)
    throw MaskLengthMismatch("transpose mask length must equal qubit count");
  const std::size_t dim = std::size_t{1} << n;
  // Qubit 0 is the most significant bit of the basis index.
  std::size_t mask_bits = 0;
  for (int qb = 0; qb < n; ++qb)
    if (transpose_mask[qb]) mask_bits |= std::size_t{1} << (n - 1 - qb);

  ComplexMatrix r(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      const std::size_t ri = (i & ~mask_bits) | (j & mask_bits);
      const std::size_t rj = (j & ~mask_bits) | (i & mask_bits);
      r(ri, rj) = rho.matrix(i, j);
    }
  return r;
}

bool is_psd(const ComplexMatrix& m, double tol) {
  require_hermitian(m, 1e-8);
  const auto vals = hermitian_eigenvalues(m);
  return vals.empty() || vals.front() >= -tol;
}

}  // namespace dicke
