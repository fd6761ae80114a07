#include "states.hpp"

#include <bit>
#include <cmath>
#include <cstdio>

#include "errors.hpp"
#include "measurement.hpp"

namespace dicke {

namespace {
constexpr std::size_t kDim = 16;
constexpr int kQubits = 4;

int weight(std::size_t index) { return std::popcount(index); }
}  // namespace

double PureState::norm() const {
  double s = 0.0;
  for (const cplx& a : amplitudes) s += std::norm(a);
  return std::sqrt(s);
}

PureState dicke_state(int n_excitations) {
  return target_state(n_excitations, 0.0);
}

PureState target_state(int n_excitations, double phi) {
  PureState psi;
  psi.amplitudes.assign(kDim, cplx{});
  int n_terms = 0;
  for (std::size_t i = 0; i < kDim; ++i)
    if (weight(i) == n_excitations) ++n_terms;
  const double amp = 1.0 / std::sqrt(static_cast<double>(n_terms));
  const cplx phase = std::polar(1.0, phi);
  for (std::size_t i = 0; i < kDim; ++i) {
    if (weight(i) != n_excitations) continue;
    // Qubit 0 is the most significant bit; it carries the mis-specified phase.
    const bool first_excited = (i & 0b1000) != 0;
    psi.amplitudes[i] = first_excited ? amp * phase : cplx(amp, 0.0);
  }
  return psi;
}

cplx inner_product(const PureState& a, const PureState& b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < kDim; ++i)
    s += std::conj(a.amplitudes[i]) * b.amplitudes[i];
  return s;
}

DensityMatrix projector(const PureState& psi) {
  ComplexMatrix m(kDim, kDim);
  for (std::size_t i = 0; i < kDim; ++i)
    for (std::size_t j = 0; j < kDim; ++j)
      m(i, j) = psi.amplitudes[i] * std::conj(psi.amplitudes[j]);
  return DensityMatrix{std::move(m), kQubits};
}

DensityMatrix depolarize(const PureState& psi, double alpha) {
  if (alpha < 0.0 || alpha > 1.0)
    throw AlphaOutOfRange("alpha must lie in [0, 1]");
  ComplexMatrix m = projector(psi).matrix;
  for (auto& e : m.data) e *= 1.0 - alpha;
  for (std::size_t i = 0; i < kDim; ++i) m(i, i) += alpha / kDim;
  return DensityMatrix{std::move(m), kQubits};
}

namespace {

// Pauli word with sigma on the qubits in `subset` (bit j set = qubit j,
// qubit 0 most significant) and identity elsewhere.
ComplexMatrix pauli_word(const ComplexMatrix& sigma, unsigned subset) {
  ComplexMatrix word(1, 1);
  word(0, 0) = 1.0;
  for (int qb = 0; qb < kQubits; ++qb) {
    const bool on = subset & (1u << (kQubits - 1 - qb));
    word = kron(word, on ? sigma : identity(2));
  }
  return word;
}

// Empirical correlator of the product of outcome signs over `subset`,
// for a 16-outcome collective setting (outcome bit 0 = "+" eigenstate,
// qubit 0 in the most significant outcome bit).
double empirical_correlator(const std::vector<double>& counts, double shots,
                            unsigned subset) {
  double s = 0.0;
  for (std::size_t o = 0; o < kDim; ++o) {
    const int parity = std::popcount(o & subset) & 1;
    s += (parity ? -1.0 : 1.0) * counts[o];
  }
  return s / shots;
}

}  // namespace

Pseudostate pseudostate_from_counts(const Dataset& dataset) {
  const SettingData* xs = nullptr;
  const SettingData* ys = nullptr;
  for (const auto& s : dataset.settings) {
    if (s.label == "x") xs = &s;
    if (s.label == "y") ys = &s;
  }
  if (!xs || !ys)
    throw MissingSetting("pseudostate needs both the x and the y setting");
  if (xs->shots < 1 || ys->shots < 1)
    throw MissingSetting("pseudostate needs at least one shot per setting");
  if (xs->counts.size() != kDim || ys->counts.size() != kDim)
    throw DesignMismatch("collective settings must have 16 outcomes");

  ComplexMatrix rho = identity(kDim);
  for (auto& e : rho.data) e /= kDim;

  const ComplexMatrix sx = pauli_x();
  const ComplexMatrix sy = pauli_y();
  for (unsigned subset = 1; subset < kDim; ++subset) {
    const double cx = empirical_correlator(xs->counts, xs->shots, subset) / kDim;
    const double cy = empirical_correlator(ys->counts, ys->shots, subset) / kDim;
    const ComplexMatrix wx = pauli_word(sx, subset);
    const ComplexMatrix wy = pauli_word(sy, subset);
    for (std::size_t i = 0; i < rho.data.size(); ++i)
      rho.data[i] += cx * wx.data[i] + cy * wy.data[i];
  }
  return Pseudostate{std::move(rho)};
}

int ModelFamily::param_count() const {
  if (kind == ModelKind::M1) return variable_phi ? 2 : 1;
  return 2;
}

std::string ModelFamily::name() const {
  char buf[64];
  if (kind == ModelKind::M1) {
    if (variable_phi)
      std::snprintf(buf, sizeof buf, "M1(phi variable)");
    else
      std::snprintf(buf, sizeof buf, "M1(phi=%.6g)", phi);
  } else {
    std::snprintf(buf, sizeof buf, "M2(phi=%.6g)", phi);
  }
  return buf;
}

ModelFamily::Eval ModelFamily::evaluate(std::span<const double> theta) const {
  if (static_cast<int>(theta.size()) != param_count())
    throw Error("model family: wrong parameter count");

  if (kind == ModelKind::M1) {
    const double q = theta[0];
    const double ph = variable_phi ? theta[1] : phi;
    return Eval{depolarize(target_state(excitations, ph), q), true};
  }

  const double eps = theta[0];
  const double q = theta[1];
  const DensityMatrix tgt = projector(target_state(excitations, phi));
  ComplexMatrix m(kDim, kDim);
  for (std::size_t i = 0; i < m.data.size(); ++i)
    m.data[i] = (1.0 - eps) * ((1.0 - q) * base->data[i] + q * tgt.matrix.data[i]);
  for (std::size_t i = 0; i < kDim; ++i) m(i, i) += eps / kDim;

  bool physical = true;
  if (base_is_pseudostate) physical = is_psd(m, kPsdTol);
  return Eval{DensityMatrix{std::move(m), kQubits}, physical};
}

ModelFamily model_m1(int excitations, double phi, bool variable_phi) {
  ModelFamily f;
  f.kind = ModelKind::M1;
  f.excitations = excitations;
  f.phi = phi;
  f.variable_phi = variable_phi;
  return f;
}

static ModelFamily make_m2(int excitations, double phi, ComplexMatrix base,
                           bool pseudo) {
  if (hermiticity_defect(base) > 1e-10)
    throw NonHermitianInput("M2 base must be Hermitian");
  if (std::abs(trace(base) - 1.0) > 1e-10)
    throw Error("M2 base must have unit trace");
  ModelFamily f;
  f.kind = ModelKind::M2;
  f.excitations = excitations;
  f.phi = phi;
  f.base = std::move(base);
  f.base_is_pseudostate = pseudo;
  return f;
}

ModelFamily model_m2(int excitations, double phi, const DensityMatrix& base) {
  return make_m2(excitations, phi, base.matrix, false);
}

ModelFamily model_m2(int excitations, double phi, const Pseudostate& base) {
  return make_m2(excitations, phi, base.matrix, true);
}

}  // namespace dicke
