#include "entanglement.hpp"

#include <cmath>

#include "errors.hpp"

namespace dicke {

double negativity(const DensityMatrix& rho, const std::vector<int>& partition) {
  const int n = rho.n_qubits;
  if (partition.empty() || static_cast<int>(partition.size()) >= n)
    throw InvalidPartition("partition must be a non-empty proper qubit subset");
  std::vector<bool> mask(n, false);
  for (int qb : partition) {
    if (qb < 0 || qb >= n || mask[qb])
      throw InvalidPartition("invalid or repeated qubit index");
    mask[qb] = true;
  }
  const ComplexMatrix pt = partial_transpose(rho, mask);
  double neg = 0.0;
  for (double lam : hermitian_eigenvalues(pt))
    if (lam < 0.0) neg -= lam;
  return neg;
}

NegativityTriple generalized_negativities(const DensityMatrix& rho) {
  if (rho.n_qubits != 4)
    throw InvalidPartition("generalized negativities are defined for 4 qubits");
  const double nab = negativity(rho, {0, 1});
  const double nac = negativity(rho, {0, 2});
  const double nad = negativity(rho, {0, 3});
  const double na = negativity(rho, {0});
  const double nb = negativity(rho, {1});
  const double nc = negativity(rho, {2});
  const double nd = negativity(rho, {3});

  NegativityTriple t;
  t.n1 = std::cbrt(nab * nac * nad);
  t.n2 = std::pow(na * nb * nc * nd, 0.25);
  t.n0 = std::pow(std::pow(t.n1, 3) * std::pow(t.n2, 4), 1.0 / 7.0);
  return t;
}

const ComplexMatrix& witness_operator() {
  static const ComplexMatrix w = [] {
    auto collective = [](const ComplexMatrix& sigma) {
      ComplexMatrix j(16, 16);
      for (int qb = 0; qb < 4; ++qb) {
        ComplexMatrix term(1, 1);
        term(0, 0) = 0.5;
        for (int p = 0; p < 4; ++p) term = kron(term, p == qb ? sigma : identity(2));
        j = j + term;
      }
      return j;
    };
    const ComplexMatrix jx = collective(pauli_x());
    const ComplexMatrix jy = collective(pauli_y());
    ComplexMatrix w16 = identity(16);
    const double offset = 3.5 + std::sqrt(3.0);
    for (auto& e : w16.data) e *= offset;
    return w16 - jx * jx - jy * jy;
  }();
  return w;
}

double witness_expectation(const ComplexMatrix& rho) {
  const ComplexMatrix& w = witness_operator();
  if (rho.rows != 16 || rho.cols != 16)
    throw DimensionMismatch("witness expectation needs a 4-qubit state");
  double v = 0.0;
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t k = 0; k < 16; ++k) v += (w(i, k) * rho(k, i)).real();
  return v;
}

double witness_threshold(const std::function<DensityMatrix(double)>& state_curve) {
  double lo = 0.0;
  double hi = 1.0;
  double flo = witness_expectation(state_curve(lo).matrix);
  const double fhi = witness_expectation(state_curve(hi).matrix);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw NoSignChange("witness expectation has no sign change on [0, 1]");
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = witness_expectation(state_curve(mid).matrix);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace dicke
