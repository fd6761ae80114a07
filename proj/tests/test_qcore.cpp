#include <doctest.h>

#include <cmath>

#include "core/errors.hpp"
#include "core/qcore.hpp"
#include "core/rng.hpp"
#include "core/states.hpp"

using namespace dicke;

namespace {

ComplexMatrix random_hermitian(std::size_t n, Rng& rng) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = 2.0 * rng.uniform() - 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      m(i, j) = cplx(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

}  // namespace

TEST_CASE("kron basics") {
  CHECK(approx_equal(kron(identity(2), identity(2)), identity(4), 0.0));

  const ComplexMatrix xx = kron(pauli_x(), pauli_x());
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(xx(i, j) == (i + j == 3 ? cplx(1.0) : cplx(0.0)));
}

TEST_CASE("kron is trace-multiplicative and associative") {
  Rng rng(1);
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix a = random_hermitian(2, rng);
    const ComplexMatrix b = random_hermitian(2, rng);
    const ComplexMatrix c = random_hermitian(2, rng);
    CHECK(std::abs(trace(kron(a, b)) - trace(a) * trace(b)) < 1e-12);
    CHECK(approx_equal(kron(kron(a, b), c), kron(a, kron(b, c)), 1e-12));
  }
}

TEST_CASE("eigenvalues of simple matrices") {
  const auto id_vals = hermitian_eigenvalues(identity(4));
  for (double v : id_vals) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

  const auto z_vals = hermitian_eigenvalues(pauli_z());
  CHECK(z_vals[0] == doctest::Approx(-1.0));
  CHECK(z_vals[1] == doctest::Approx(1.0));
}

TEST_CASE("eigendecomposition reconstructs the matrix") {
  Rng rng(2);
  for (int t = 0; t < 5; ++t) {
    const ComplexMatrix m = random_hermitian(8, rng);
    const EigResult eig = hermitian_eig(m);

    double sum = 0.0;
    for (double v : eig.values) sum += v;
    CHECK(std::abs(sum - trace(m).real()) < 1e-8);

    ComplexMatrix recomposed(8, 8);
    for (std::size_t k = 0; k < 8; ++k)
      for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j)
          recomposed(i, j) +=
              eig.values[k] * eig.vectors(i, k) * std::conj(eig.vectors(j, k));
    CHECK(max_abs_diff(recomposed, m) < 1e-8);
  }
}

TEST_CASE("eigensolver rejects non-Hermitian input") {
  ComplexMatrix m(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(hermitian_eigenvalues(m), NonHermitianInput);
}

TEST_CASE("partial transpose of a product state") {
  Rng rng(3);
  // Two random single-qubit states.
  ComplexMatrix a = random_hermitian(2, rng);
  ComplexMatrix b = random_hermitian(2, rng);
  auto make_state = [](ComplexMatrix m) {
    const auto vals = hermitian_eigenvalues(m);
    // Shift positive and normalize.
    for (std::size_t i = 0; i < m.rows; ++i) m(i, i) -= vals.front() - 0.1;
    const double tr = trace(m).real();
    for (auto& e : m.data) e /= tr;
    return m;
  };
  a = make_state(a);
  b = make_state(b);
  const DensityMatrix rho{kron(a, b), 2};

  ComplexMatrix at = a;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) at(i, j) = a(j, i);
  const ComplexMatrix pt = partial_transpose(rho, {true, false});
  CHECK(approx_equal(pt, kron(at, b), 1e-12));
  CHECK(is_psd(pt, 1e-9));
}

TEST_CASE("partial transpose is an involution and preserves structure") {
  Rng rng(4);
  ComplexMatrix m = random_hermitian(16, rng);
  const double tr = trace(m).real();
  m(0, 0) += 1.0 - tr;  // force unit trace
  const DensityMatrix rho{m, 4};
  const std::vector<bool> mask = {true, false, true, false};
  const ComplexMatrix once = partial_transpose(rho, mask);
  CHECK(hermiticity_defect(once) < 1e-12);
  CHECK(std::abs(trace(once) - trace(m)) < 1e-12);
  const ComplexMatrix twice = partial_transpose(DensityMatrix{once, 4}, mask);
  CHECK(approx_equal(twice, m, 0.0));
}

TEST_CASE("Bell state partial transpose has eigenvalues -1/2, 1/2 x3") {
  ComplexMatrix bell(4, 4);
  // |Phi+> = (|00> + |11>)/sqrt(2)
  const std::size_t idx[2] = {0, 3};
  for (std::size_t i : idx)
    for (std::size_t j : idx) bell(i, j) = 0.5;
  const auto vals =
      hermitian_eigenvalues(partial_transpose(DensityMatrix{bell, 2}, {true, false}));
  CHECK(vals[0] == doctest::Approx(-0.5).epsilon(1e-10));
  for (int i = 1; i < 4; ++i) CHECK(vals[i] == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("partial transpose rejects wrong mask length") {
  const DensityMatrix rho = depolarize(dicke_state(2), 0.5);
  CHECK_THROWS_AS(partial_transpose(rho, {true, false}), MaskLengthMismatch);
}

TEST_CASE("is_psd") {
  ComplexMatrix mixed = identity(16);
  for (auto& e : mixed.data) e /= 16.0;
  CHECK(is_psd(mixed, 1e-9));

  ComplexMatrix bad(2, 2);
  bad(0, 0) = 1.5;
  bad(1, 1) = -0.5;
  CHECK_FALSE(is_psd(bad, 1e-9));
}

TEST_CASE("eigenvalue sum equals trace for random Hermitian matrices") {
  Rng rng(5);
  for (std::size_t n : {2, 4, 7, 16}) {
    const ComplexMatrix m = random_hermitian(n, rng);
    double sum = 0.0;
    for (double v : hermitian_eigenvalues(m)) sum += v;
    CHECK(std::abs(sum - trace(m).real()) < 1e-8);
  }
}
