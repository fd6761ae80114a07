#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "measurement.hpp"
#include "states.hpp"

namespace dicke {

/// Sentinel for log-likelihood of an impossible or excluded parameter
/// point (model probability 0 on an observed outcome, or an unphysical
/// pseudostate mixture).
inline constexpr double kLogZero = -1e300;

struct FitResult {
  std::vector<double> theta_hat;
  double log_likelihood = 0.0;
  int k = 0;
  double aic = 0.0;
  double aicc = 0.0;
};

struct RankedModel {
  std::string name;
  FitResult fit;
};

struct RankingReport {
  std::vector<RankedModel> models;
  double fpm_loglik_bound = 0.0;
  int fpm_k = 0;
  double fpm_aic = 0.0;
  /// AIC(model) - AIC(FPM bound); negative values prefer the simple model.
  std::vector<double> delta_aic;
};

/// Multinomial log-likelihood sum_settings sum_k n_k ln p_k(theta), in nats,
/// accumulated with compensated summation. Returns kLogZero when the model
/// assigns probability <= 0 to an observed outcome or the parameter point
/// is excluded as unphysical.
double log_likelihood(const ModelFamily& family, std::span<const double> theta,
                      const Dataset& dataset);

/// sum_settings sum_k n_k ln(n_k / N_setting); the likelihood any model can
/// at best attain on this dataset.
double fpm_loglik_upper_bound(const Dataset& dataset);

/// AICc = -2 L + 2K + 2K(K+1)/(N-K-1).
double aicc(double log_lik, int k, double n);

struct FitOptions {
  double grid_step = 0.01;            // q and epsilon axes
  double phi_grid_step = 0.017453292519943295;  // pi/180, variable-phi axis
  double refine_tol = 1e-6;
};

/// Deterministic coarse grid scan over the parameter box followed by
/// cyclic per-axis golden-section refinement around the best grid point.
FitResult fit_mle(const ModelFamily& family, const Dataset& dataset,
                  const FitOptions& opts = {});

/// Fits each family and ranks it against the FPM likelihood bound with
/// the given parameter count (255 for product SIC, 30 for collective x/y).
RankingReport rank_models(const std::vector<ModelFamily>& families,
                          const Dataset& dataset, int fpm_k,
                          const FitOptions& opts = {});

/// Iterative R rho R fixed point for an approximate MLE state on product-SIC
/// data, started from the maximally mixed state. The likelihood is checked
/// to be non-decreasing at every step; iteration stops when the gain falls
/// below tol or max_iters is reached.
DensityMatrix approx_mle_state(const Dataset& train, int max_iters, double tol);

/// Splits once, builds the M2 base from the training half (approximate MLE
/// state for product SIC, observation pseudostate for collective x/y) and
/// ranks M2 against the FPM bound on the validation half only.
RankingReport cross_model_protocol(const Dataset& dataset, int excitations,
                                   double phi, std::uint64_t seed,
                                   const FitOptions& opts = {});

/// AIC(m2) - AIC(m1), both fitted on the identical validation dataset.
double compare_m1_m2(const Dataset& validation, const ModelFamily& m1,
                     const ModelFamily& m2, const FitOptions& opts = {});

std::string ranking_report_to_json(const RankingReport& report);

}  // namespace dicke
