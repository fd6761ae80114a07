#include <doctest.h>

#include <cmath>
#include <map>

#include "core/errors.hpp"
#include "core/measurement.hpp"
#include "core/qcore.hpp"
#include "core/rng.hpp"
#include "core/states.hpp"

using namespace dicke;

namespace {

void check_povm(const Povm& povm, std::size_t dim) {
  ComplexMatrix sum(dim, dim);
  for (const ComplexMatrix& e : povm.effects) {
    REQUIRE(e.rows == dim);
    CHECK(hermiticity_defect(e) < 1e-12);
    CHECK(is_psd(e, 1e-10));
    sum = sum + e;
  }
  CHECK(approx_equal(sum, identity(dim), 1e-10));
}

}  // namespace

TEST_CASE("single-qubit SIC povm") {
  const Povm sic = sic_povm_qubit();
  REQUIRE(sic.effects.size() == 4);
  check_povm(sic, 2);
  // Rank-1 effects of trace 1/2, pairwise Tr(E_j E_k) = 1/12.
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(std::abs(trace(sic.effects[j]) - 0.5) < 1e-12);
    const auto vals = hermitian_eigenvalues(sic.effects[j]);
    CHECK(std::abs(vals[0]) < 1e-12);
    CHECK(vals[1] == doctest::Approx(0.5).epsilon(1e-10));
    for (std::size_t k = j + 1; k < 4; ++k)
      CHECK(std::abs(trace(sic.effects[j] * sic.effects[k]) - 1.0 / 12.0) < 1e-12);
  }
}

TEST_CASE("product SIC design") {
  const MeasurementDesign& d = design_by_id("product_sic");
  REQUIRE(d.settings.size() == 1);
  REQUIRE(d.settings[0].povm.effects.size() == 256);
  CHECK(d.settings[0].shot_fraction == 1.0);
  check_povm(d.settings[0].povm, 16);
}

TEST_CASE("collective xy design") {
  const MeasurementDesign& d = design_by_id("collective_xy");
  REQUIRE(d.settings.size() == 2);
  CHECK(d.settings[0].label == "x");
  CHECK(d.settings[1].label == "y");
  for (const Setting& s : d.settings) {
    CHECK(s.shot_fraction == 0.5);
    REQUIRE(s.povm.effects.size() == 16);
    check_povm(s.povm, 16);
    // Rank-1 projectors.
    for (const ComplexMatrix& e : s.povm.effects)
      CHECK(approx_equal(e * e, e, 1e-12));
  }
  CHECK_THROWS_AS(design_by_id("no_such_design"), DesignMismatch);
}

TEST_CASE("Born probabilities") {
  ComplexMatrix mixed = identity(16);
  for (auto& e : mixed.data) e /= 16.0;

  // Uniform over the 256 product-SIC outcomes for the maximally mixed state.
  const auto p_sic =
      born_probabilities(mixed, design_by_id("product_sic").settings[0].povm);
  for (double p : p_sic) CHECK(p == doctest::Approx(1.0 / 256.0).epsilon(1e-12));

  // |0000> measured along x: every outcome has probability 1/16.
  ComplexMatrix ground(16, 16);
  ground(0, 0) = 1.0;
  const auto p_x =
      born_probabilities(ground, design_by_id("collective_xy").settings[0].povm);
  double total = 0.0;
  for (double p : p_x) {
    CHECK(p == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
    total += p;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sampling is deterministic and multinomially sane") {
  const std::vector<double> probs = {0.1, 0.2, 0.3, 0.4};
  const auto a = sample_counts(probs, 1000, 42);
  const auto b = sample_counts(probs, 1000, 42);
  CHECK(a == b);
  const auto c = sample_counts(probs, 1000, 43);
  CHECK(a != c);

  double sum = 0.0;
  for (double n : a) {
    CHECK(n == std::floor(n));
    sum += n;
  }
  CHECK(sum == 1000.0);

  // Frequencies track probabilities over many shots.
  const auto big = sample_counts(probs, 200000, 7);
  for (std::size_t k = 0; k < 4; ++k)
    CHECK(big[k] / 200000.0 == doctest::Approx(probs[k]).epsilon(0.03));

  CHECK_THROWS_AS(sample_counts({0.5, 0.2}, 10, 1), InvalidDistribution);
}

TEST_CASE("simulate_dataset allocates shots per setting") {
  const DensityMatrix rho = depolarize(dicke_state(2), 0.2);
  const Dataset d =
      simulate_dataset(design_by_id("collective_xy"), rho.matrix, 1000, 5);
  REQUIRE(d.settings.size() == 2);
  CHECK(d.design_id == "collective_xy");
  CHECK(d.rng_seed == 5);
  for (const SettingData& s : d.settings) {
    CHECK(s.shots == 500.0);
    double sum = 0.0;
    for (double n : s.counts) sum += n;
    CHECK(sum == 500.0);
  }
  CHECK(d.total_shots() == 1000.0);
  CHECK_THROWS_AS(
      simulate_dataset(design_by_id("collective_xy"), rho.matrix, 999, 5),
      ConfigInvalid);
}

TEST_CASE("split_dataset partitions shots without replacement") {
  const DensityMatrix rho = depolarize(dicke_state(1), 0.2);
  const Dataset d =
      simulate_dataset(design_by_id("product_sic"), rho.matrix, 400, 9);
  const auto [train, val] = split_dataset(d, 0.5, 17);
  REQUIRE(train.settings.size() == 1);
  double train_sum = 0.0, val_sum = 0.0;
  for (std::size_t k = 0; k < 256; ++k) {
    CHECK(train.settings[0].counts[k] + val.settings[0].counts[k] ==
          d.settings[0].counts[k]);
    CHECK(train.settings[0].counts[k] >= 0.0);
    train_sum += train.settings[0].counts[k];
    val_sum += val.settings[0].counts[k];
  }
  CHECK(train_sum == 200.0);
  CHECK(val_sum == 200.0);

  // Deterministic in the seed.
  const auto [train2, val2] = split_dataset(d, 0.5, 17);
  CHECK(train2.settings[0].counts == train.settings[0].counts);

  Dataset tiny = d;
  tiny.settings[0].counts.assign(256, 0.0);
  tiny.settings[0].counts[0] = 1.0;
  tiny.settings[0].shots = 1.0;
  CHECK_THROWS_AS(split_dataset(tiny, 0.5, 1), TooFewShots);
}

TEST_CASE("dataset JSON round trip") {
  const DensityMatrix rho = depolarize(dicke_state(2), 0.2);
  const Dataset d =
      simulate_dataset(design_by_id("collective_xy"), rho.matrix, 200, 3);
  const Dataset back = dataset_from_json(dataset_to_json(d));
  CHECK(back.design_id == d.design_id);
  CHECK(back.rng_seed == d.rng_seed);
  REQUIRE(back.settings.size() == d.settings.size());
  for (std::size_t i = 0; i < d.settings.size(); ++i) {
    CHECK(back.settings[i].label == d.settings[i].label);
    CHECK(back.settings[i].shots == d.settings[i].shots);
    CHECK(back.settings[i].counts == d.settings[i].counts);
  }
  CHECK_THROWS_AS(dataset_from_json("{\"bogus\": 1}"), ConfigInvalid);
}

TEST_CASE("rng stream mixing separates settings") {
  CHECK(mix_seed(1, 0) != mix_seed(1, 1));
  CHECK(mix_seed(1, 0) != mix_seed(2, 0));
  Rng r(99);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  std::map<std::uint64_t, int> hist;
  for (int i = 0; i < 6000; ++i) ++hist[r.below(6)];
  for (const auto& [face, n] : hist) {
    CHECK(face < 6);
    CHECK(n > 800);
  }
}
