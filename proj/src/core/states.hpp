#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcore.hpp"

namespace dicke {

struct Dataset;  // measurement.hpp

/// Four-qubit pure state; amplitudes indexed with qubit 0 as the most
/// significant bit (|1000> is index 8).
struct PureState {
  std::vector<cplx> amplitudes;  // length 16, unit norm

  double norm() const;
};

/// Equal superposition of the weight-k computational basis states, k = 1 or 2.
PureState dicke_state(int n_excitations);

/// Dicke state with the first-qubit-excited terms carrying phase e^{i phi};
/// phi = 0 recovers dicke_state exactly.
PureState target_state(int n_excitations, double phi);

cplx inner_product(const PureState& a, const PureState& b);

/// |psi><psi| as a density matrix.
DensityMatrix projector(const PureState& psi);

/// (1 - alpha) |psi><psi| + alpha I/16.
DensityMatrix depolarize(const PureState& psi, double alpha);

/// Trace-one Hermitian matrix, possibly with negative eigenvalues.
struct Pseudostate {
  ComplexMatrix matrix;
};

/// rho_observation built from collective x/y counts: each measured Pauli
/// word (tensor products of sigma_x with identity, and of sigma_y with
/// identity, the all-identity word excluded) gets its empirical correlator
/// divided by 16; every unmeasured word coefficient is zero.
Pseudostate pseudostate_from_counts(const Dataset& dataset);

enum class ModelKind { M1, M2 };

/// Few-parameter family mapping theta to a trace-one Hermitian matrix.
///   M1, fixed phi:    theta = (q),      K = 1
///   M1, variable phi: theta = (q, phi), K = 2
///   M2, fixed phi:    theta = (eps, q), K = 2
struct ModelFamily {
  ModelKind kind = ModelKind::M1;
  int excitations = 2;
  double phi = 0.0;
  bool variable_phi = false;  // promotes phi to a fitted parameter (M1 only)
  std::optional<ComplexMatrix> base;  // rho_MLE or rho_observation (M2)
  bool base_is_pseudostate = false;

  int param_count() const;
  std::string name() const;

  struct Eval {
    DensityMatrix state;  // trace-one Hermitian; PSD unless flagged
    bool physical = true;
  };
  Eval evaluate(std::span<const double> theta) const;
};

ModelFamily model_m1(int excitations, double phi, bool variable_phi = false);
ModelFamily model_m2(int excitations, double phi, const DensityMatrix& base);
ModelFamily model_m2(int excitations, double phi, const Pseudostate& base);

}  // namespace dicke
