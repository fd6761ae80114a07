#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "bayes.hpp"
#include "entanglement.hpp"
#include "errors.hpp"
#include "inference.hpp"
#include "rng.hpp"

namespace dicke {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double gauss(Rng& rng) {
  // Box-Muller; one variate per call is plenty here.
  const double u1 = std::max(rng.uniform(), 1e-300);
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

PureState random_pure_state(Rng& rng) {
  PureState psi;
  psi.amplitudes.resize(16);
  for (auto& a : psi.amplitudes) a = cplx(gauss(rng), gauss(rng));
  const double n = psi.norm();
  for (auto& a : psi.amplitudes) a /= n;
  return psi;
}

// Schmidt-coefficient negativity of a pure state: ((sum sqrt(lambda))^2 - 1)/2
// with lambda the eigenvalues of the reduced state on the partition.
double schmidt_negativity(const PureState& psi, const std::vector<int>& part) {
  std::vector<int> comp;
  for (int qb = 0; qb < 4; ++qb)
    if (std::find(part.begin(), part.end(), qb) == part.end()) comp.push_back(qb);
  const std::size_t rows = std::size_t{1} << part.size();
  const std::size_t cols = std::size_t{1} << comp.size();
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < 16; ++i) {
    std::size_t r = 0;
    for (std::size_t p = 0; p < part.size(); ++p)
      r |= ((i >> (3 - part[p])) & 1) << (part.size() - 1 - p);
    std::size_t c = 0;
    for (std::size_t p = 0; p < comp.size(); ++p)
      c |= ((i >> (3 - comp[p])) & 1) << (comp.size() - 1 - p);
    m(r, c) = psi.amplitudes[i];
  }
  const ComplexMatrix gram = m * dagger(m);
  double s = 0.0;
  for (double lam : hermitian_eigenvalues(gram))
    s += std::sqrt(std::max(lam, 0.0));
  return 0.5 * (s * s - 1.0);
}

DensityMatrix rho_actual(int excitations = 2) {
  return depolarize(target_state(excitations, 0.0), 0.2);
}

CheckResult check_negativities() {
  const NegativityTriple t = generalized_negativities(rho_actual());
  const bool ok = std::abs(t.n0 - 0.4770) <= 5e-4 &&
                  std::abs(t.n1 - 0.6293) <= 5e-4 &&
                  std::abs(t.n2 - 0.3875) <= 5e-4;
  return {"negativity_reproduction", ok,
          fmt("N0=%.6f N1=%.6f N2=%.6f vs (0.4770, 0.6293, 0.3875) +-5e-4",
              t.n0, t.n1, t.n2)};
}

CheckResult check_witness_threshold() {
  const PureState d42 = dicke_state(2);
  const double root =
      witness_threshold([&](double a) { return depolarize(d42, a); });
  const double closed_form = (2.5 - std::sqrt(3.0)) / 4.0;
  const bool ok =
      std::abs(root - 0.1920) <= 1e-4 && std::abs(root - closed_form) <= 2e-6;
  return {"witness_threshold", ok,
          fmt("root=%.6f, closed form %.6f, target 0.1920 +-1e-4", root,
              closed_form)};
}

CheckResult check_witness_phase_curve() {
  // Zero crossing in phi of <W> for the pure target state, on [0, pi/2].
  auto pure_expect = [](double phi) {
    return witness_expectation(projector(target_state(2, phi)).matrix);
  };
  double lo = 0.0, hi = kPi / 2.0;
  double flo = pure_expect(lo);
  while (hi - lo > 1e-8) {
    const double mid = 0.5 * (lo + hi);
    if ((pure_expect(mid) > 0.0) == (flo > 0.0))
      lo = mid;
    else
      hi = mid;
  }
  const double crossing = 0.5 * (lo + hi);
  // <W>(phi) = sqrt(3) - 1/2 - 2 cos(phi) for the pure target, so the
  // crossing has the closed form arccos((2 sqrt(3) - 1)/4) ~ 0.9071,
  // a little below pi/3; beyond it the witness misses the entanglement.
  const double closed_form = std::acos((2.0 * std::sqrt(3.0) - 1.0) / 4.0);
  bool ok = std::abs(crossing - closed_form) <= 1e-4 && crossing < kPi / 3.0;

  double min_mixed = 1e9;
  for (int i = 0; i <= 180; ++i) {
    const double phi = i * (kPi / 90.0);
    const ModelFamily m1 = model_m1(2, phi);
    const double q = 0.2;
    const double v = witness_expectation(m1.evaluate({&q, 1}).state.matrix);
    min_mixed = std::min(min_mixed, v);
  }
  ok = ok && min_mixed > 0.0;
  return {"witness_phase_curve", ok,
          fmt("pure-state crossing at phi=%.4f (closed form %.4f); min <W> at "
              "q=0.2 over phi grid = %.5f",
              crossing, closed_form, min_mixed)};
}

CheckResult check_structural_identities() {
  bool ok = true;
  std::string detail;

  // AIC / AICc arithmetic.
  ok &= std::abs(aicc(0.0, 1, 1000) - (2.0 + 4.0 / 998.0)) < 1e-12;
  ok &= std::abs((aicc(0.0, 255, 1000) - 2.0 * 255) -
                 2.0 * 255 * 256 / (1000.0 - 256.0)) < 1e-9;
  ok &= aicc(-5.0, 0, 10) == 10.0;

  // POVM completeness and positivity at 1e-10, both designs.
  for (const char* id : {"product_sic", "collective_xy"}) {
    const MeasurementDesign& design = design_by_id(id);
    for (const Setting& s : design.settings) {
      ComplexMatrix sum(s.povm.effects[0].rows, s.povm.effects[0].cols);
      for (const auto& e : s.povm.effects) {
        sum = sum + e;
        if (hermitian_eigenvalues(e).front() < -1e-10) ok = false;
      }
      if (max_abs_diff(sum, identity(sum.rows)) > 1e-10) ok = false;
    }
  }

  // FPM bound dominates model likelihoods on randomized datasets.
  Rng rng(20240817);
  int dominated = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    const std::string id = (t % 2 == 0) ? "product_sic" : "collective_xy";
    const int exc = 1 + static_cast<int>(rng.below(2));
    const double alpha = rng.uniform();
    const DensityMatrix truth = depolarize(target_state(exc, rng.uniform() * kPi), alpha);
    const Dataset data = simulate_dataset(design_by_id(id), truth.matrix, 200,
                                          1000 + static_cast<std::uint64_t>(t));
    const double bound = fpm_loglik_upper_bound(data);
    const ModelFamily family = model_m1(exc, rng.uniform() * 2.0 * kPi);
    const double q = rng.uniform();
    if (log_likelihood(family, {&q, 1}, data) <= bound + 1e-9) ++dominated;
  }
  ok &= dominated == trials;

  // R rho R likelihood monotonicity (asserted inside approx_mle_state).
  int monotone_runs = 0;
  for (int t = 0; t < 20; ++t) {
    const double alpha = rng.uniform();
    const DensityMatrix truth = depolarize(target_state(2, 0.0), alpha);
    const Dataset data = simulate_dataset(design_by_id("product_sic"),
                                          truth.matrix, 400,
                                          5000 + static_cast<std::uint64_t>(t));
    try {
      const DensityMatrix mle = approx_mle_state(data, 150, 1e-7);
      if (is_psd(mle.matrix, 1e-9)) ++monotone_runs;
    } catch (const Error&) {
    }
  }
  ok &= monotone_runs == 20;

  detail = fmt("bound dominated %g/200 datasets; monotone R-rho-R runs %g/20",
               dominated, monotone_runs);
  return {"structural_identities", ok, detail};
}

CheckResult check_schmidt_oracle() {
  const std::vector<std::vector<int>> partitions = {
      {0}, {1}, {2}, {3}, {0, 1}, {0, 2}, {0, 3}};
  Rng rng(77);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const PureState psi = random_pure_state(rng);
    const DensityMatrix rho = projector(psi);
    for (const auto& part : partitions) {
      const double via_pt = negativity(rho, part);
      const double via_schmidt = schmidt_negativity(psi, part);
      worst = std::max(worst, std::abs(via_pt - via_schmidt));
    }
  }
  return {"schmidt_oracle_equivalence", worst <= 1e-9,
          fmt("max |PT - Schmidt| = %.3g over 100 states x 7 bipartitions",
              worst)};
}

double neg_delta_aic_m1(const Dataset& data, int exc, double phi, int fpm_k) {
  const RankingReport r = rank_models({model_m1(exc, phi)}, data, fpm_k);
  return -r.delta_aic[0];
}

CheckResult check_aic_sign_tomography() {
  const MeasurementDesign& design = design_by_id("product_sic");
  const DensityMatrix truth = rho_actual(1);
  int win0 = 0, lose_half_pi = 0, win_quarter = 0;
  const int seeds = 50;
  for (int s = 0; s < seeds; ++s) {
    const Dataset big = simulate_dataset(design, truth.matrix, 10000,
                                         100 + static_cast<std::uint64_t>(s));
    if (neg_delta_aic_m1(big, 1, 0.0, 255) > 0.0) ++win0;
    if (neg_delta_aic_m1(big, 1, kPi / 2.0, 255) < 0.0) ++lose_half_pi;
    const Dataset small = simulate_dataset(design, truth.matrix, 1000,
                                           900 + static_cast<std::uint64_t>(s));
    if (neg_delta_aic_m1(small, 1, kPi / 4.0, 255) > 0.0) ++win_quarter;
  }
  const bool ok = win0 >= 48 && lose_half_pi >= 48 && win_quarter >= 40;
  return {"aic_sign_tomography", ok,
          fmt("N=10000: phi=0 wins %g/50, phi=pi/2 loses %g/50; N=1000: "
              "phi=pi/4 wins %g/50",
              win0, lose_half_pi, win_quarter)};
}

CheckResult check_aic_sign_witness() {
  const MeasurementDesign& design = design_by_id("collective_xy");
  const DensityMatrix truth = rho_actual(2);
  int win0 = 0, lose_third = 0;
  const int seeds = 50;
  for (int s = 0; s < seeds; ++s) {
    const Dataset data = simulate_dataset(design, truth.matrix, 1000,
                                          300 + static_cast<std::uint64_t>(s));
    if (neg_delta_aic_m1(data, 2, 0.0, 30) > 0.0) ++win0;
    if (neg_delta_aic_m1(data, 2, kPi / 3.0, 30) < 0.0) ++lose_third;
  }
  const bool ok = win0 >= 45 && lose_third >= 45;
  return {"aic_sign_witness", ok,
          fmt("N=1000: phi=0 wins %g/50, phi=pi/3 loses %g/50", win0,
              lose_third)};
}

double physical_fraction(std::uint64_t shots, std::uint64_t seed) {
  const MeasurementDesign& design = design_by_id("collective_xy");
  const Dataset data = simulate_dataset(design, rho_actual(2).matrix, shots, seed);
  const ModelFamily m2 = model_m2(2, 0.0, pseudostate_from_counts(data));
  int physical = 0, total = 0;
  for (int i = 0; i <= 100; ++i)
    for (int j = 0; j <= 100; ++j) {
      const double theta[2] = {i * 0.01, j * 0.01};
      ++total;
      if (m2.evaluate({theta, 2}).physical) ++physical;
    }
  return static_cast<double>(physical) / total;
}

CheckResult check_physicality_map() {
  const std::uint64_t ns[3] = {100, 1000, 10000};
  double avg[3] = {0.0, 0.0, 0.0};
  const int seeds = 5;
  for (int i = 0; i < 3; ++i) {
    for (int s = 0; s < seeds; ++s)
      avg[i] += physical_fraction(ns[i], 40 + static_cast<std::uint64_t>(s));
    avg[i] /= seeds;
  }
  bool ok = true;
  for (double f : avg) ok &= f >= 0.65 && f <= 0.80;
  ok &= avg[0] <= avg[1] && avg[1] <= avg[2];
  return {"physicality_map", ok,
          fmt("seed-averaged physical fraction: N=100 %.4f, N=1000 %.4f, "
              "N=10000 %.4f (band [0.65, 0.80], monotone)",
              avg[0], avg[1], avg[2])};
}

CheckResult check_posterior_consistency() {
  const MeasurementDesign& design = design_by_id("collective_xy");
  const DensityMatrix truth = rho_actual(2);
  const ModelFamily m1 = model_m1(2, 0.0);
  int covered = 0;
  const int seeds = 50;
  for (int s = 0; s < seeds; ++s) {
    const Dataset data = simulate_dataset(design, truth.matrix, 1000,
                                          700 + static_cast<std::uint64_t>(s));
    const PosteriorGrid grid = posterior_over_params(m1, data, 0.01);
    const MonotonePosterior post =
        negativity_posterior(grid, m1, Monotone::N0, 50);
    if (post.ci_low <= 0.4770 && 0.4770 <= post.ci_high) ++covered;
  }
  return {"posterior_consistency", covered >= 45,
          fmt("95%% interval of N0 covered 0.4770 in %g/50 seeds", covered)};
}

}  // namespace

std::vector<CheckResult> verify_quick() {
  return {check_negativities(), check_witness_threshold(),
          check_witness_phase_curve(), check_structural_identities(),
          check_schmidt_oracle()};
}

std::vector<CheckResult> verify_full() {
  auto results = verify_quick();
  results.push_back(check_aic_sign_tomography());
  results.push_back(check_aic_sign_witness());
  results.push_back(check_physicality_map());
  results.push_back(check_posterior_consistency());
  return results;
}

}  // namespace dicke
