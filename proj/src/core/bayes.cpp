#include "bayes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <json.hpp>

#include "errors.hpp"

namespace dicke {

namespace {

std::vector<double> axis_points(double lo, double hi, double step) {
  std::vector<double> pts;
  const int n = static_cast<int>(std::ceil((hi - lo) / step));
  for (int i = 0; i <= n; ++i) pts.push_back(std::min(lo + i * step, hi));
  return pts;
}

std::vector<double> grid_theta(const PosteriorGrid& grid, std::size_t flat) {
  std::vector<double> theta(grid.axes.size());
  for (std::size_t ax = grid.axes.size(); ax-- > 0;) {
    theta[ax] = grid.axes[ax][flat % grid.axes[ax].size()];
    flat /= grid.axes[ax].size();
  }
  return theta;
}

}  // namespace

PosteriorGrid posterior_over_params(const ModelFamily& family,
                                    const Dataset& dataset, double grid_step) {
  if (grid_step <= 0.0 || grid_step > 0.05)
    throw ConfigInvalid("posterior grid step must lie in (0, 0.05]");
  if (family.variable_phi)
    throw ConfigInvalid("posterior is computed at fixed phi");

  PosteriorGrid grid;
  for (int ax = 0; ax < family.param_count(); ++ax)
    grid.axes.push_back(axis_points(0.0, 1.0, grid_step));

  std::size_t total = 1;
  for (const auto& a : grid.axes) total *= a.size();
  std::vector<double> loglik(total, kLogZero);
  grid.excluded.assign(total, 1);

  double max_ll = kLogZero;
  for (std::size_t i = 0; i < total; ++i) {
    const auto theta = grid_theta(grid, i);
    const double ll = log_likelihood(family, theta, dataset);
    if (ll <= kLogZero) continue;
    loglik[i] = ll;
    grid.excluded[i] = 0;
    max_ll = std::max(max_ll, ll);
  }
  if (max_ll <= kLogZero)
    throw AllZeroWeights("every grid point is excluded or impossible");

  grid.weights.assign(total, 0.0);
  double norm = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    if (grid.excluded[i]) continue;
    grid.weights[i] = std::exp(loglik[i] - max_ll);
    norm += grid.weights[i];
  }
  for (auto& w : grid.weights) w /= norm;
  return grid;
}

MonotonePosterior negativity_posterior(const PosteriorGrid& grid,
                                       const ModelFamily& family, Monotone which,
                                       int n_bins) {
  std::vector<std::pair<double, double>> samples;  // (value, weight)
  samples.reserve(grid.weights.size());
  for (std::size_t i = 0; i < grid.weights.size(); ++i) {
    if (grid.excluded[i] || grid.weights[i] == 0.0) continue;
    const auto theta = grid_theta(grid, i);
    const auto eval = family.evaluate(theta);
    const NegativityTriple t = generalized_negativities(eval.state);
    const double v = which == Monotone::N0 ? t.n0
                     : which == Monotone::N1 ? t.n1
                                             : t.n2;
    samples.emplace_back(v, grid.weights[i]);
  }

  MonotonePosterior p;
  for (int b = 0; b < n_bins; ++b) {
    p.bin_left.push_back(static_cast<double>(b) / n_bins);
    p.bin_right.push_back(static_cast<double>(b + 1) / n_bins);
    p.bin_weight.push_back(0.0);
  }
  double mean = 0.0;
  for (const auto& [v, w] : samples) {
    mean += v * w;
    int b = static_cast<int>(v * n_bins);
    b = std::clamp(b, 0, n_bins - 1);
    p.bin_weight[b] += w;
  }
  p.mean = mean;

  std::sort(samples.begin(), samples.end());
  double acc = 0.0;
  p.ci_low = samples.empty() ? 0.0 : samples.front().first;
  p.ci_high = samples.empty() ? 0.0 : samples.back().first;
  bool low_set = false;
  for (const auto& [v, w] : samples) {
    acc += w;
    if (!low_set && acc >= 0.025) {
      p.ci_low = v;
      low_set = true;
    }
    if (acc >= 0.975) {
      p.ci_high = v;
      break;
    }
  }
  return p;
}

std::string monotone_posterior_to_csv(const MonotonePosterior& p) {
  std::string out = "bin_left,bin_right,weight\n";
  char buf[96];
  for (std::size_t i = 0; i < p.bin_weight.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", p.bin_left[i],
                  p.bin_right[i], p.bin_weight[i]);
    out += buf;
  }
  return out;
}

std::string monotone_posterior_summary_json(const MonotonePosterior& p) {
  nlohmann::json j;
  j["mean"] = p.mean;
  j["ci_low"] = p.ci_low;
  j["ci_high"] = p.ci_high;
  return j.dump();
}

}  // namespace dicke
