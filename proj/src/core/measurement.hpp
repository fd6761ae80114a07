#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcore.hpp"
#include "states.hpp"

namespace dicke {

/// A positive-operator-valued measure: effects are PSD and sum to identity.
struct Povm {
  std::vector<ComplexMatrix> effects;
  std::vector<std::string> labels;
};

struct Setting {
  Povm povm;
  double shot_fraction = 1.0;
  std::string label;
};

struct MeasurementDesign {
  std::string id;
  std::vector<Setting> settings;
};

/// Single-qubit SIC-POVM: four effects (I + r_k . sigma)/4 with the Bloch
/// vectors of the regular tetrahedron anchored at (1,1,1)/sqrt(3).
Povm sic_povm_qubit();

/// One setting of 4^4 = 256 product-SIC effects ("product_sic").
MeasurementDesign product_sic_design();

/// Two settings of 16 rank-1 projectors each, all qubits measured along
/// x or along y, with half the shots each ("collective_xy").
MeasurementDesign collective_pauli_design();

/// Design lookup by id; throws DesignMismatch for unknown ids.
const MeasurementDesign& design_by_id(const std::string& id);

/// p_k = Re Tr(rho E_k). Tiny negatives from round-off are clamped to 0;
/// a pseudostate probability below -1e-6 raises NegativeProbability.
std::vector<double> born_probabilities(const ComplexMatrix& rho, const Povm& povm);

/// Multinomial draw, deterministic for a fixed seed. Counts are stored as
/// doubles so that exact-probability surrogate datasets (non-integer
/// "counts") flow through the same likelihood machinery; sampled counts
/// are always whole numbers.
std::vector<double> sample_counts(const std::vector<double>& probabilities,
                                  std::uint64_t shots, std::uint64_t seed);

struct SettingData {
  std::string label;
  double shots = 0.0;
  std::vector<double> counts;
};

struct Dataset {
  std::string design_id;
  std::uint64_t rng_seed = 0;
  std::vector<SettingData> settings;

  double total_shots() const;
};

/// Samples one dataset from the design's Born distributions for rho.
/// Shots are allocated exactly per setting fraction; an allocation that is
/// not an integer (odd N on the two-setting design) is an error.
Dataset simulate_dataset(const MeasurementDesign& design, const ComplexMatrix& rho,
                         std::uint64_t shots, std::uint64_t seed);

/// Shot-level split without replacement; the two parts sum to the original
/// counts exactly. Requires integral counts and >= 2 shots per setting.
std::pair<Dataset, Dataset> split_dataset(const Dataset& d, double fraction,
                                          std::uint64_t seed);

std::string dataset_to_json(const Dataset& d);
Dataset dataset_from_json(const std::string& text);

}  // namespace dicke
