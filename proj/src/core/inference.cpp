#include "inference.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <json.hpp>

#include "errors.hpp"

namespace dicke {

namespace {

// Kahan-compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

const MeasurementDesign& design_for(const Dataset& dataset) {
  const MeasurementDesign& design = design_by_id(dataset.design_id);
  if (design.settings.size() != dataset.settings.size())
    throw DesignMismatch("dataset setting count does not match design");
  for (std::size_t i = 0; i < design.settings.size(); ++i)
    if (design.settings[i].povm.effects.size() != dataset.settings[i].counts.size())
      throw DesignMismatch("dataset outcome count does not match design");
  return design;
}

double counts_log_likelihood(const Dataset& dataset,
                             const std::vector<std::vector<double>>& probs) {
  CompensatedSum acc;
  for (std::size_t si = 0; si < dataset.settings.size(); ++si) {
    const auto& counts = dataset.settings[si].counts;
    for (std::size_t k = 0; k < counts.size(); ++k) {
      if (counts[k] <= 0.0) continue;
      if (probs[si][k] <= 0.0) return kLogZero;
      acc.add(counts[k] * std::log(probs[si][k]));
    }
  }
  return acc.sum;
}

}  // namespace

double log_likelihood(const ModelFamily& family, std::span<const double> theta,
                      const Dataset& dataset) {
  const MeasurementDesign& design = design_for(dataset);
  const ModelFamily::Eval eval = family.evaluate(theta);
  if (!eval.physical) return kLogZero;
  std::vector<std::vector<double>> probs;
  probs.reserve(design.settings.size());
  for (const Setting& s : design.settings)
    probs.push_back(born_probabilities(eval.state.matrix, s.povm));
  return counts_log_likelihood(dataset, probs);
}

double fpm_loglik_upper_bound(const Dataset& dataset) {
  if (dataset.settings.empty()) throw EmptyDataset("dataset has no settings");
  CompensatedSum acc;
  for (const auto& s : dataset.settings) {
    if (s.shots < 1.0) throw EmptyDataset("setting with no shots");
    for (double n : s.counts) {
      if (n <= 0.0) continue;
      acc.add(n * std::log(n / s.shots));
    }
  }
  return acc.sum;
}

double aicc(double log_lik, int k, double n) {
  const double aic = -2.0 * log_lik + 2.0 * k;
  if (k == 0) return aic;
  if (n <= static_cast<double>(k + 1))
    throw SampleTooSmall("AICc needs N > K + 1");
  return aic + 2.0 * k * (k + 1.0) / (n - k - 1.0);
}

namespace {

struct Axis {
  double lo;
  double hi;
  double step;
};

// Golden-section maximization on [a, b]; f may return kLogZero inside the
// bracket (treated as an ordinary very low value).
double golden_max(const std::function<double(double)>& f, double a, double b,
                  double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

std::vector<Axis> family_axes(const ModelFamily& family, const FitOptions& opts) {
  if (opts.grid_step > 0.05)
    throw ConfigInvalid("grid step must be <= 0.05");
  constexpr double two_pi = 6.283185307179586;
  if (family.kind == ModelKind::M1) {
    if (family.variable_phi)
      return {{0.0, 1.0, opts.grid_step}, {0.0, two_pi, opts.phi_grid_step}};
    return {{0.0, 1.0, opts.grid_step}};
  }
  return {{0.0, 1.0, opts.grid_step}, {0.0, 1.0, opts.grid_step}};
}

}  // namespace

FitResult fit_mle(const ModelFamily& family, const Dataset& dataset,
                  const FitOptions& opts) {
  const std::vector<Axis> axes = family_axes(family, opts);
  const int k = family.param_count();

  auto objective = [&](const std::vector<double>& theta) {
    return log_likelihood(family, theta, dataset);
  };

  // Coarse scan.
  std::vector<double> best;
  double best_ll = kLogZero;
  std::vector<double> theta(k);
  std::function<void(int)> scan = [&](int axis) {
    if (axis == k) {
      const double ll = objective(theta);
      if (ll > best_ll || (best.empty() && ll > kLogZero)) {
        best_ll = ll;
        best = theta;
      }
      return;
    }
    const Axis& ax = axes[axis];
    const int steps = static_cast<int>(std::ceil((ax.hi - ax.lo) / ax.step));
    for (int i = 0; i <= steps; ++i) {
      theta[axis] = std::min(ax.lo + i * ax.step, ax.hi);
      scan(axis + 1);
    }
  };
  scan(0);
  if (best.empty() || best_ll <= kLogZero)
    throw AllPointsUnphysical("every grid point is excluded from the model");

  // Cyclic golden-section refinement around the best grid point.
  const std::vector<double> grid_best = best;
  const double grid_best_ll = best_ll;
  for (int cycle = 0; cycle < 50; ++cycle) {
    double max_move = 0.0;
    for (int axis = 0; axis < k; ++axis) {
      const Axis& ax = axes[axis];
      const double lo = std::max(ax.lo, best[axis] - ax.step);
      const double hi = std::min(ax.hi, best[axis] + ax.step);
      std::vector<double> probe = best;
      const double x = golden_max(
          [&](double v) {
            probe[axis] = v;
            return objective(probe);
          },
          lo, hi, opts.refine_tol);
      max_move = std::max(max_move, std::abs(x - best[axis]));
      best[axis] = x;
    }
    if (max_move < opts.refine_tol) break;
  }
  // A refinement step can land on an excluded point right at the PSD
  // boundary; fall back to the grid optimum in that case.
  const double refined_ll = objective(best);
  if (refined_ll >= grid_best_ll) {
    best_ll = refined_ll;
  } else {
    best = grid_best;
    best_ll = grid_best_ll;
  }

  FitResult result;
  result.theta_hat = best;
  result.log_likelihood = best_ll;
  result.k = k;
  result.aic = -2.0 * best_ll + 2.0 * k;
  result.aicc = aicc(best_ll, k, dataset.total_shots());
  return result;
}

RankingReport rank_models(const std::vector<ModelFamily>& families,
                          const Dataset& dataset, int fpm_k,
                          const FitOptions& opts) {
  RankingReport report;
  report.fpm_loglik_bound = fpm_loglik_upper_bound(dataset);
  report.fpm_k = fpm_k;
  report.fpm_aic = -2.0 * report.fpm_loglik_bound + 2.0 * fpm_k;
  for (const ModelFamily& family : families) {
    RankedModel rm;
    rm.name = family.name();
    rm.fit = fit_mle(family, dataset, opts);
    report.delta_aic.push_back(rm.fit.aic - report.fpm_aic);
    report.models.push_back(std::move(rm));
  }
  return report;
}

DensityMatrix approx_mle_state(const Dataset& train, int max_iters, double tol) {
  if (train.design_id != "product_sic")
    throw DesignMismatch("approximate MLE expects product-SIC data");
  const MeasurementDesign& design = design_for(train);
  const Povm& povm = design.settings[0].povm;
  const auto& counts = train.settings[0].counts;
  const double shots = train.settings[0].shots;
  const std::size_t dim = 16;

  ComplexMatrix rho = identity(dim);
  for (auto& e : rho.data) e /= static_cast<double>(dim);

  auto loglik = [&](const ComplexMatrix& m) {
    const auto probs = born_probabilities(m, povm);
    CompensatedSum acc;
    for (std::size_t k = 0; k < counts.size(); ++k) {
      if (counts[k] <= 0.0) continue;
      if (probs[k] <= 0.0) return kLogZero;
      acc.add(counts[k] * std::log(probs[k]));
    }
    return acc.sum;
  };

  double current = loglik(rho);
  for (int it = 0; it < max_iters; ++it) {
    const auto probs = born_probabilities(rho, povm);
    ComplexMatrix r(dim, dim);
    for (std::size_t k = 0; k < counts.size(); ++k) {
      if (counts[k] <= 0.0) continue;
      const double w = counts[k] / shots / std::max(probs[k], 1e-300);
      for (std::size_t i = 0; i < r.data.size(); ++i)
        r.data[i] += w * povm.effects[k].data[i];
    }
    ComplexMatrix next = r * rho * r;
    // Re-hermitize and renormalize to contain round-off drift.
    ComplexMatrix herm = dagger(next);
    for (std::size_t i = 0; i < next.data.size(); ++i)
      next.data[i] = 0.5 * (next.data[i] + herm.data[i]);
    const double tr = trace(next).real();
    for (auto& e : next.data) e /= tr;

    const double updated = loglik(next);
    if (updated < current - 1e-8)
      throw Error("R rho R iteration decreased the likelihood");
    rho = std::move(next);
    const double gain = updated - current;
    current = updated;
    if (gain < tol) break;
  }
  return DensityMatrix{std::move(rho), 4};
}

RankingReport cross_model_protocol(const Dataset& dataset, int excitations,
                                   double phi, std::uint64_t seed,
                                   const FitOptions& opts) {
  const auto [train, validation] = split_dataset(dataset, 0.5, seed);
  ModelFamily m2;
  int fpm_k = 0;
  if (dataset.design_id == "product_sic") {
    m2 = model_m2(excitations, phi, approx_mle_state(train, 300, 1e-6));
    fpm_k = 255;
  } else if (dataset.design_id == "collective_xy") {
    m2 = model_m2(excitations, phi, pseudostate_from_counts(train));
    fpm_k = 30;
  } else {
    throw DesignMismatch("cross modeling supports product_sic and collective_xy");
  }
  return rank_models({m2}, validation, fpm_k, opts);
}

double compare_m1_m2(const Dataset& validation, const ModelFamily& m1,
                     const ModelFamily& m2, const FitOptions& opts) {
  const FitResult f1 = fit_mle(m1, validation, opts);
  const FitResult f2 = fit_mle(m2, validation, opts);
  return f2.aic - f1.aic;
}

std::string ranking_report_to_json(const RankingReport& report) {
  nlohmann::json j;
  j["models"] = nlohmann::json::array();
  for (const auto& rm : report.models) {
    nlohmann::json jm;
    jm["name"] = rm.name;
    jm["K"] = rm.fit.k;
    jm["theta_hat"] = rm.fit.theta_hat;
    jm["loglik"] = rm.fit.log_likelihood;
    jm["aic"] = rm.fit.aic;
    jm["aicc"] = rm.fit.aicc;
    j["models"].push_back(std::move(jm));
  }
  j["fpm"] = {{"K", report.fpm_k},
              {"loglik_bound", report.fpm_loglik_bound},
              {"aic", report.fpm_aic}};
  j["delta_aic"] = report.delta_aic;
  return j.dump();
}

}  // namespace dicke
