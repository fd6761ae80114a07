#pragma once

#include <functional>
#include <vector>

#include "qcore.hpp"
#include "states.hpp"

namespace dicke {

struct NegativityTriple {
  double n0 = 0.0;
  double n1 = 0.0;
  double n2 = 0.0;
};

/// Negativity (||rho^T_S||_1 - 1)/2 for the bipartition S vs complement;
/// the partition must be a non-empty proper subset of the qubits.
double negativity(const DensityMatrix& rho, const std::vector<int>& partition);

/// N1 over the three balanced bipartitions, N2 over the four one-vs-three
/// bipartitions (geometric means), N0 = (N1^3 N2^4)^{1/7}.
NegativityTriple generalized_negativities(const DensityMatrix& rho);

/// W = 7/2 + sqrt(3) - Jx^2 - Jy^2 with J = sum_j sigma^{(j)}/2.
const ComplexMatrix& witness_operator();

/// Re Tr(W rho); accepts pseudostates.
double witness_expectation(const ComplexMatrix& rho);

/// Bisection root of alpha -> witness_expectation(curve(alpha)) on [0, 1]
/// to 1e-6; throws NoSignChange when the endpoints have equal signs.
double witness_threshold(const std::function<DensityMatrix(double)>& state_curve);

}  // namespace dicke
