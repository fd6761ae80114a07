#pragma once

#include <string>
#include <vector>

#include "entanglement.hpp"
#include "inference.hpp"

namespace dicke {

/// Discrete posterior over a family's parameter box (uniform prior),
/// stored on a regular grid. Excluded points (unphysical or impossible)
/// carry weight zero.
struct PosteriorGrid {
  std::vector<std::vector<double>> axes;  // grid points per parameter
  std::vector<double> weights;            // flattened row-major, sums to 1
  std::vector<char> excluded;             // parallel to weights
};

PosteriorGrid posterior_over_params(const ModelFamily& family,
                                    const Dataset& dataset, double grid_step);

enum class Monotone { N0, N1, N2 };

struct MonotonePosterior {
  std::vector<double> bin_left;
  std::vector<double> bin_right;
  std::vector<double> bin_weight;
  double mean = 0.0;
  double ci_low = 0.0;   // central 95% interval
  double ci_high = 0.0;
};

/// Pushes the parameter posterior through the chosen negativity monotone
/// and aggregates it into n_bins bins over [0, 1].
MonotonePosterior negativity_posterior(const PosteriorGrid& grid,
                                       const ModelFamily& family, Monotone which,
                                       int n_bins);

std::string monotone_posterior_to_csv(const MonotonePosterior& p);
std::string monotone_posterior_summary_json(const MonotonePosterior& p);

}  // namespace dicke
