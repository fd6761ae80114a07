#include "measurement.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

#include "errors.hpp"
#include "rng.hpp"

namespace dicke {

namespace {
constexpr double kInvSqrt3 = 0.5773502691896258;
}

Povm sic_povm_qubit() {
  static const double bloch[4][3] = {
      {kInvSqrt3, kInvSqrt3, kInvSqrt3},
      {kInvSqrt3, -kInvSqrt3, -kInvSqrt3},
      {-kInvSqrt3, kInvSqrt3, -kInvSqrt3},
      {-kInvSqrt3, -kInvSqrt3, kInvSqrt3},
  };
  const ComplexMatrix sx = pauli_x();
  const ComplexMatrix sy = pauli_y();
  const ComplexMatrix sz = pauli_z();
  Povm povm;
  for (int k = 0; k < 4; ++k) {
    ComplexMatrix e = identity(2);
    for (std::size_t i = 0; i < e.data.size(); ++i)
      e.data[i] += bloch[k][0] * sx.data[i] + bloch[k][1] * sy.data[i] +
                   bloch[k][2] * sz.data[i];
    for (auto& v : e.data) v *= 0.25;
    povm.effects.push_back(std::move(e));
    povm.labels.push_back(std::to_string(k));
  }
  return povm;
}

MeasurementDesign product_sic_design() {
  const Povm single = sic_povm_qubit();
  Povm product;
  for (int o = 0; o < 256; ++o) {
    ComplexMatrix e(1, 1);
    e(0, 0) = 1.0;
    std::string label;
    for (int qb = 0; qb < 4; ++qb) {
      const int digit = (o >> (2 * (3 - qb))) & 3;  // qubit 0 first in label
      e = kron(e, single.effects[digit]);
      label += static_cast<char>('0' + digit);
    }
    product.effects.push_back(std::move(e));
    product.labels.push_back(label);
  }
  MeasurementDesign design;
  design.id = "product_sic";
  design.settings.push_back(Setting{std::move(product), 1.0, "sic"});
  return design;
}

MeasurementDesign collective_pauli_design() {
  auto make_setting = [](const ComplexMatrix& sigma, const std::string& label) {
    // Single-qubit projectors onto the +/- eigenstates of sigma.
    ComplexMatrix plus = identity(2);
    ComplexMatrix minus = identity(2);
    for (std::size_t i = 0; i < 4; ++i) {
      plus.data[i] = 0.5 * (plus.data[i] + sigma.data[i]);
      minus.data[i] = 0.5 * (minus.data[i] - sigma.data[i]);
    }
    Povm povm;
    for (int o = 0; o < 16; ++o) {
      ComplexMatrix e(1, 1);
      e(0, 0) = 1.0;
      std::string name;
      for (int qb = 0; qb < 4; ++qb) {
        const bool down = (o >> (3 - qb)) & 1;  // bit set = "-" outcome
        e = kron(e, down ? minus : plus);
        name += down ? '-' : '+';
      }
      povm.effects.push_back(std::move(e));
      povm.labels.push_back(name);
    }
    return Setting{std::move(povm), 0.5, label};
  };

  MeasurementDesign design;
  design.id = "collective_xy";
  design.settings.push_back(make_setting(pauli_x(), "x"));
  design.settings.push_back(make_setting(pauli_y(), "y"));
  return design;
}

const MeasurementDesign& design_by_id(const std::string& id) {
  static const std::map<std::string, MeasurementDesign> designs = [] {
    std::map<std::string, MeasurementDesign> m;
    m.emplace("product_sic", product_sic_design());
    m.emplace("collective_xy", collective_pauli_design());
    return m;
  }();
  const auto it = designs.find(id);
  if (it == designs.end()) throw DesignMismatch("unknown design id: " + id);
  return it->second;
}

std::vector<double> born_probabilities(const ComplexMatrix& rho, const Povm& povm) {
  std::vector<double> probs;
  probs.reserve(povm.effects.size());
  for (const ComplexMatrix& e : povm.effects) {
    if (e.rows != rho.rows || e.cols != rho.cols)
      throw DimensionMismatch("state and effect dimensions differ");
    double p = 0.0;
    for (std::size_t i = 0; i < rho.rows; ++i)
      for (std::size_t k = 0; k < rho.cols; ++k)
        p += (rho(i, k) * e(k, i)).real();
    if (p < -1e-6)
      throw NegativeProbability("pseudostate probability below -1e-6");
    probs.push_back(std::max(p, 0.0));
  }
  return probs;
}

std::vector<double> sample_counts(const std::vector<double>& probabilities,
                                  std::uint64_t shots, std::uint64_t seed) {
  double sum = 0.0;
  for (double p : probabilities) {
    if (p < -1e-9 || !std::isfinite(p))
      throw InvalidDistribution("negative or non-finite probability");
    sum += std::max(p, 0.0);
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw InvalidDistribution("probabilities do not sum to 1");

  std::vector<double> cdf(probabilities.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    acc += std::max(probabilities[k], 0.0) / sum;
    cdf[k] = acc;
  }
  cdf.back() = 1.0;

  std::vector<double> counts(probabilities.size(), 0.0);
  Rng rng(seed);
  for (std::uint64_t t = 0; t < shots; ++t) {
    const double u = rng.uniform();
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u,
                                     [](double c, double v) { return c <= v; });
    counts[static_cast<std::size_t>(it - cdf.begin())] += 1.0;
  }
  return counts;
}

double Dataset::total_shots() const {
  double n = 0.0;
  for (const auto& s : settings) n += s.shots;
  return n;
}

Dataset simulate_dataset(const MeasurementDesign& design, const ComplexMatrix& rho,
                         std::uint64_t shots, std::uint64_t seed) {
  Dataset d;
  d.design_id = design.id;
  d.rng_seed = seed;
  for (std::size_t i = 0; i < design.settings.size(); ++i) {
    const Setting& s = design.settings[i];
    const double exact = static_cast<double>(shots) * s.shot_fraction;
    const auto alloc = static_cast<std::uint64_t>(std::llround(exact));
    if (std::abs(exact - static_cast<double>(alloc)) > 1e-9)
      throw ConfigInvalid("shot count does not split evenly across settings");
    const auto probs = born_probabilities(rho, s.povm);
    d.settings.push_back(SettingData{
        s.label, static_cast<double>(alloc),
        sample_counts(probs, alloc, mix_seed(seed, i))});
  }
  return d;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& d, double fraction,
                                          std::uint64_t seed) {
  if (fraction <= 0.0 || fraction >= 1.0)
    throw ConfigInvalid("split fraction must lie strictly between 0 and 1");
  Dataset a = d;
  Dataset b = d;
  for (std::size_t si = 0; si < d.settings.size(); ++si) {
    const SettingData& s = d.settings[si];
    const auto shots = static_cast<std::uint64_t>(std::llround(s.shots));
    if (std::abs(s.shots - static_cast<double>(shots)) > 1e-9)
      throw TooFewShots("split requires integral per-setting shot counts");
    if (shots < 2) throw TooFewShots("split requires >= 2 shots per setting");

    std::vector<std::uint64_t> remaining(s.counts.size());
    std::uint64_t total = 0;
    for (std::size_t k = 0; k < s.counts.size(); ++k) {
      remaining[k] = static_cast<std::uint64_t>(std::llround(s.counts[k]));
      total += remaining[k];
    }
    const auto take = static_cast<std::uint64_t>(
        std::llround(fraction * static_cast<double>(shots)));

    // Multivariate hypergeometric draw: pick `take` shots uniformly
    // without replacement from the recorded outcomes.
    std::vector<double> taken(s.counts.size(), 0.0);
    Rng rng(mix_seed(seed, si));
    for (std::uint64_t t = 0; t < take; ++t) {
      std::uint64_t r = rng.below(total);
      for (std::size_t k = 0; k < remaining.size(); ++k) {
        if (r < remaining[k]) {
          taken[k] += 1.0;
          --remaining[k];
          --total;
          break;
        }
        r -= remaining[k];
      }
    }
    a.settings[si].shots = static_cast<double>(take);
    a.settings[si].counts = taken;
    b.settings[si].shots = s.shots - static_cast<double>(take);
    for (std::size_t k = 0; k < s.counts.size(); ++k)
      b.settings[si].counts[k] = s.counts[k] - taken[k];
  }
  return {std::move(a), std::move(b)};
}

std::string dataset_to_json(const Dataset& d) {
  nlohmann::json j;
  j["design_id"] = d.design_id;
  j["seed"] = d.rng_seed;
  j["settings"] = nlohmann::json::array();
  for (const auto& s : d.settings) {
    nlohmann::json js;
    js["label"] = s.label;
    js["shots"] = s.shots;
    js["counts"] = s.counts;
    j["settings"].push_back(std::move(js));
  }
  return j.dump();
}

Dataset dataset_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    Dataset d;
    d.design_id = j.at("design_id").get<std::string>();
    d.rng_seed = j.at("seed").get<std::uint64_t>();
    for (const auto& js : j.at("settings")) {
      SettingData s;
      s.label = js.at("label").get<std::string>();
      s.shots = js.at("shots").get<double>();
      s.counts = js.at("counts").get<std::vector<double>>();
      d.settings.push_back(std::move(s));
    }
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigInvalid(std::string("dataset JSON: ") + e.what());
  }
}

}  // namespace dicke
