#include <doctest.h>

#include <cmath>
#include <numeric>

#include "core/bayes.hpp"
#include "core/entanglement.hpp"
#include "core/errors.hpp"
#include "core/measurement.hpp"
#include "core/states.hpp"

using namespace dicke;

TEST_CASE("parameter posterior normalizes and peaks near the truth") {
  const DensityMatrix rho = depolarize(dicke_state(2), 0.2);
  const Dataset d =
      simulate_dataset(design_by_id("collective_xy"), rho.matrix, 4000, 6);
  const ModelFamily m1 = model_m1(2, 0.0);
  const PosteriorGrid grid = posterior_over_params(m1, d, 0.01);

  REQUIRE(grid.axes.size() == 1);
  REQUIRE(grid.weights.size() == grid.axes[0].size());
  const double total =
      std::accumulate(grid.weights.begin(), grid.weights.end(), 0.0);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));

  double mode = 0.0, best = -1.0, mean = 0.0;
  for (std::size_t i = 0; i < grid.weights.size(); ++i) {
    mean += grid.axes[0][i] * grid.weights[i];
    if (grid.weights[i] > best) {
      best = grid.weights[i];
      mode = grid.axes[0][i];
    }
  }
  CHECK(std::abs(mode - 0.2) < 0.05);
  CHECK(std::abs(mean - 0.2) < 0.05);
}

TEST_CASE("posterior rejects bad configuration") {
  const DensityMatrix rho = depolarize(dicke_state(2), 0.2);
  const Dataset d =
      simulate_dataset(design_by_id("collective_xy"), rho.matrix, 200, 6);
  CHECK_THROWS_AS(posterior_over_params(model_m1(2, 0.0), d, 0.2), ConfigInvalid);
  CHECK_THROWS_AS(posterior_over_params(model_m1(2, 0.0), d, 0.0), ConfigInvalid);
  CHECK_THROWS_AS(posterior_over_params(model_m1(2, 0.0, true), d, 0.01),
                  ConfigInvalid);
}

TEST_CASE("pushforward through a degenerate posterior is a point mass") {
  // Exact-probability data at a single grid-representable q concentrates
  // the posterior, so the pushforward variance collapses onto the truth.
  const DensityMatrix rho = depolarize(dicke_state(2), 0.2);
  Dataset d;
  d.design_id = "collective_xy";
  const MeasurementDesign& design = design_by_id("collective_xy");
  for (const Setting& s : design.settings) {
    SettingData sd;
    sd.label = s.label;
    sd.shots = 50000.0;
    for (double p : born_probabilities(rho.matrix, s.povm))
      sd.counts.push_back(p * sd.shots);
    d.settings.push_back(std::move(sd));
  }
  const ModelFamily m1 = model_m1(2, 0.0);
  const PosteriorGrid grid = posterior_over_params(m1, d, 0.01);
  const MonotonePosterior post =
      negativity_posterior(grid, m1, Monotone::N0, 100);

  const NegativityTriple truth = generalized_negativities(rho);
  CHECK(std::abs(post.mean - truth.n0) < 0.01);
  CHECK(post.ci_low <= truth.n0 + 0.01);
  CHECK(post.ci_high >= truth.n0 - 0.01);
  CHECK(post.ci_high - post.ci_low < 0.05);

  const double mass =
      std::accumulate(post.bin_weight.begin(), post.bin_weight.end(), 0.0);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("sampled-data posterior interval covers the known negativity") {
  const DensityMatrix rho = depolarize(dicke_state(2), 0.2);
  const Dataset d =
      simulate_dataset(design_by_id("collective_xy"), rho.matrix, 1000, 14);
  const ModelFamily m1 = model_m1(2, 0.0);
  const PosteriorGrid grid = posterior_over_params(m1, d, 0.01);
  const MonotonePosterior post =
      negativity_posterior(grid, m1, Monotone::N0, 60);
  CHECK(post.ci_low < 0.4770);
  CHECK(post.ci_high > 0.4770);
  CHECK(post.ci_low < post.mean);
  CHECK(post.mean < post.ci_high);
}

TEST_CASE("posterior serialization") {
  MonotonePosterior p;
  p.bin_left = {0.0, 0.5};
  p.bin_right = {0.5, 1.0};
  p.bin_weight = {0.25, 0.75};
  p.mean = 0.6;
  p.ci_low = 0.1;
  p.ci_high = 0.9;
  const std::string csv = monotone_posterior_to_csv(p);
  CHECK(csv.find("bin_left,bin_right,weight\n") == 0);
  CHECK(csv.find("0.5,1,0.75") != std::string::npos);
  const std::string json = monotone_posterior_summary_json(p);
  CHECK(json.find("\"mean\":0.6") != std::string::npos);
  CHECK(json.find("\"ci_low\":0.1") != std::string::npos);
}
