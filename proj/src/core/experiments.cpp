#include "experiments.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>

#include <json.hpp>

#include "bayes.hpp"
#include "entanglement.hpp"
#include "errors.hpp"
#include "inference.hpp"
#include "rng.hpp"

namespace dicke {

namespace {

constexpr double kPi = std::numbers::pi;

const std::set<std::string>& known_experiments() {
  static const std::set<std::string> ids = {"fig1a", "fig1b", "fig2", "fig3",
                                            "fig4",  "fig5",  "fig6", "fig7",
                                            "fig8"};
  return ids;
}

std::vector<double> default_phi(const std::string& experiment) {
  if (experiment == "fig4")
    return {0.0,        kPi / 12.0, kPi / 6.0, kPi / 4.0,
            kPi / 3.0,  5 * kPi / 12.0, kPi / 2.0};
  if (experiment == "fig5" || experiment == "fig8")
    return {0.0, kPi / 6.0, kPi / 3.0};
  return {0.0, kPi / 8.0, kPi / 4.0, 3.0 * kPi / 8.0, kPi / 2.0};
}

std::vector<std::uint64_t> default_shots(const std::string& experiment) {
  if (experiment == "fig7") return {50};
  if (experiment == "fig6") return {100, 1000, 10000};
  return {1000, 10000};
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

struct Row {
  std::string text;
};

DensityMatrix actual_state(const ExperimentConfig& cfg, int excitations) {
  return depolarize(target_state(excitations, 0.0), cfg.alpha);
}

FitOptions fit_options(const ExperimentConfig& cfg) {
  FitOptions o;
  o.grid_step = cfg.grid_step;
  o.phi_grid_step = cfg.phi_grid_step;
  return o;
}

void sweep_m1_ranking(const ExperimentConfig& cfg, const std::string& design_id,
                      int fpm_k, std::vector<Row>& rows) {
  const MeasurementDesign& design = design_by_id(design_id);
  const DensityMatrix truth = actual_state(cfg, cfg.excitations);
  for (double phi : cfg.phi)
    for (std::uint64_t n : cfg.shots)
      for (std::uint64_t seed : cfg.seeds) {
        const Dataset data = simulate_dataset(design, truth.matrix, n, seed);
        const RankingReport r = rank_models({model_m1(cfg.excitations, phi)},
                                            data, fpm_k, fit_options(cfg));
        rows.push_back({num(phi) + "," + std::to_string(n) + "," +
                        std::to_string(seed) + "," + num(-r.delta_aic[0])});
      }
}

void sweep_cross_model(const ExperimentConfig& cfg, const std::string& design_id,
                       std::vector<Row>& rows) {
  const MeasurementDesign& design = design_by_id(design_id);
  const DensityMatrix truth = actual_state(cfg, cfg.excitations);
  for (double phi : cfg.phi)
    for (std::uint64_t n : cfg.shots)
      for (std::uint64_t seed : cfg.seeds) {
        const Dataset data = simulate_dataset(design, truth.matrix, n, seed);
        const RankingReport r = cross_model_protocol(
            data, cfg.excitations, phi, mix_seed(seed, 1), fit_options(cfg));
        rows.push_back({num(phi) + "," + std::to_string(n) + "," +
                        std::to_string(seed) + "," + num(-r.delta_aic[0])});
      }
}

void sweep_posterior(const ExperimentConfig& cfg, bool cross_model,
                     Monotone which, std::vector<Row>& rows) {
  const MeasurementDesign& design = design_by_id("collective_xy");
  const DensityMatrix truth = actual_state(cfg, cfg.excitations);
  for (double phi : cfg.phi)
    for (std::uint64_t n : cfg.shots)
      for (std::uint64_t seed : cfg.seeds) {
        const Dataset data = simulate_dataset(design, truth.matrix, n, seed);
        ModelFamily family;
        const Dataset* scored = &data;
        Dataset validation;
        if (cross_model) {
          auto [train, valid] = split_dataset(data, 0.5, mix_seed(seed, 1));
          family = model_m2(cfg.excitations, phi, pseudostate_from_counts(train));
          validation = std::move(valid);
          scored = &validation;
        } else {
          family = model_m1(cfg.excitations, phi);
        }
        const PosteriorGrid grid =
            posterior_over_params(family, *scored, cfg.grid_step);
        const MonotonePosterior post =
            negativity_posterior(grid, family, which, cfg.n_bins);
        const std::string prefix = num(phi) + "," + std::to_string(n) + "," +
                                   std::to_string(seed) + ",";
        for (std::size_t b = 0; b < post.bin_weight.size(); ++b)
          rows.push_back({prefix + num(post.bin_left[b]) + "," +
                          num(post.bin_right[b]) + "," + num(post.bin_weight[b])});
      }
}

void sweep_witness_curve(const ExperimentConfig& cfg, std::vector<Row>& rows) {
  for (double phi : cfg.phi) {
    const ModelFamily m1 = model_m1(cfg.excitations, phi);
    const double q0 = 0.0, q2 = 0.2;
    const double pure = witness_expectation(m1.evaluate({&q0, 1}).state.matrix);
    const double mixed = witness_expectation(m1.evaluate({&q2, 1}).state.matrix);
    rows.push_back({num(phi) + "," + num(pure) + "," + num(mixed)});
  }
}

void sweep_physmap(const ExperimentConfig& cfg, std::vector<Row>& rows) {
  const MeasurementDesign& design = design_by_id("collective_xy");
  const DensityMatrix truth = actual_state(cfg, cfg.excitations);
  const std::uint64_t seed = cfg.seeds.front();
  const double phi = cfg.phi.front();
  for (std::uint64_t n : cfg.shots) {
    const Dataset data = simulate_dataset(design, truth.matrix, n, seed);
    const ModelFamily m2 =
        model_m2(cfg.excitations, phi, pseudostate_from_counts(data));
    const int steps = static_cast<int>(std::llround(1.0 / cfg.grid_step));
    for (int i = 0; i <= steps; ++i)
      for (int j = 0; j <= steps; ++j) {
        const double theta[2] = {i * cfg.grid_step, j * cfg.grid_step};
        const bool physical = m2.evaluate({theta, 2}).physical;
        rows.push_back({std::to_string(n) + "," + num(theta[0]) + "," +
                        num(theta[1]) + "," + (physical ? "1" : "0")});
      }
  }
}

void sweep_m1_vs_m2(const ExperimentConfig& cfg, std::vector<Row>& rows) {
  const MeasurementDesign& design = design_by_id("collective_xy");
  const DensityMatrix truth = actual_state(cfg, cfg.excitations);
  const std::uint64_t n = cfg.shots.front();
  for (double phi : cfg.phi)
    for (std::uint64_t seed : cfg.seeds) {
      const Dataset validation = simulate_dataset(design, truth.matrix, n, seed);
      const Dataset extra =
          simulate_dataset(design, truth.matrix, n, mix_seed(seed, 9));
      const ModelFamily m1 = model_m1(cfg.excitations, phi);
      const ModelFamily m2 =
          model_m2(cfg.excitations, phi, pseudostate_from_counts(extra));
      const double delta = compare_m1_m2(validation, m1, m2, fit_options(cfg));
      rows.push_back(
          {num(phi) + "," + std::to_string(seed) + "," + num(delta)});
    }
}

std::string header_for(const std::string& experiment) {
  if (experiment == "fig2") return "excitations,phi,N,seed,neg_delta_aic";
  if (experiment == "fig4") return "phi,expect_pure,expect_q02";
  if (experiment == "fig5" || experiment == "fig8")
    return "phi,N,seed,bin_left,bin_right,weight";
  if (experiment == "fig6") return "N,epsilon,q,physical";
  if (experiment == "fig7") return "phi,seed,delta_aic";
  return "phi,N,seed,neg_delta_aic";
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigInvalid(std::string("config is not valid JSON: ") + e.what());
  }

  ExperimentConfig cfg;
  try {
    cfg.experiment = j.at("experiment").get<std::string>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigInvalid("experiment: missing or not a string");
  }
  if (!known_experiments().count(cfg.experiment))
    throw ConfigInvalid("experiment: unknown id '" + cfg.experiment + "'");

  cfg.excitations = j.value("excitations", cfg.experiment == "fig1a" ? 1 : 2);
  if (cfg.excitations != 1 && cfg.excitations != 2)
    throw ConfigInvalid("excitations: must be 1 or 2");
  cfg.alpha = j.value("alpha", 0.2);
  if (cfg.alpha < 0.0 || cfg.alpha > 1.0)
    throw ConfigInvalid("alpha: must lie in [0, 1]");
  cfg.phi = j.value("phi", default_phi(cfg.experiment));
  if (cfg.phi.empty()) throw ConfigInvalid("phi: list must be non-empty");
  cfg.shots = j.value("N", default_shots(cfg.experiment));
  if (cfg.shots.empty()) throw ConfigInvalid("N: list must be non-empty");
  for (std::uint64_t n : cfg.shots)
    if (n == 0 || n % 2 != 0)
      throw ConfigInvalid("N: all values must be positive and even");
  cfg.seeds = j.value("seeds", std::vector<std::uint64_t>{1, 2, 3});
  if (cfg.seeds.empty()) throw ConfigInvalid("seeds: list must be non-empty");
  cfg.grid_step = j.value("grid_step", 0.01);
  if (cfg.grid_step <= 0.0 || cfg.grid_step > 0.05)
    throw ConfigInvalid("grid_step: must lie in (0, 0.05]");
  cfg.phi_grid_step = j.value("phi_grid_step", cfg.phi_grid_step);
  cfg.n_bins = j.value("n_bins", 50);
  if (cfg.n_bins < 1) throw ConfigInvalid("n_bins: must be >= 1");
  cfg.out = j.value("out", "experiment");
  if (cfg.out.empty()) throw ConfigInvalid("out: must be non-empty");
  return cfg;
}

std::string run_experiment(const ExperimentConfig& cfg) {
  if (!known_experiments().count(cfg.experiment))
    throw ConfigInvalid("experiment: unknown id '" + cfg.experiment + "'");

  std::vector<Row> rows;
  if (cfg.experiment == "fig1a") {
    sweep_m1_ranking(cfg, "product_sic", 255, rows);
  } else if (cfg.experiment == "fig1b") {
    sweep_cross_model(cfg, "product_sic", rows);
  } else if (cfg.experiment == "fig2") {
    for (int exc : {1, 2}) {
      ExperimentConfig sub = cfg;
      sub.excitations = exc;
      std::vector<Row> part;
      sweep_m1_ranking(sub, "product_sic", 255, part);
      for (auto& r : part)
        rows.push_back({std::to_string(exc) + "," + r.text});
    }
  } else if (cfg.experiment == "fig3") {
    sweep_m1_ranking(cfg, "collective_xy", 30, rows);
  } else if (cfg.experiment == "fig4") {
    sweep_witness_curve(cfg, rows);
  } else if (cfg.experiment == "fig5") {
    sweep_posterior(cfg, false, Monotone::N0, rows);
  } else if (cfg.experiment == "fig6") {
    sweep_physmap(cfg, rows);
  } else if (cfg.experiment == "fig7") {
    sweep_m1_vs_m2(cfg, rows);
  } else if (cfg.experiment == "fig8") {
    sweep_posterior(cfg, true, Monotone::N2, rows);
  }

  nlohmann::json manifest;
  manifest["experiment"] = cfg.experiment;
  manifest["excitations"] = cfg.excitations;
  manifest["alpha"] = cfg.alpha;
  manifest["phi"] = cfg.phi;
  manifest["N"] = cfg.shots;
  manifest["seeds"] = cfg.seeds;
  manifest["grid_step"] = cfg.grid_step;
  manifest["phi_grid_step"] = cfg.phi_grid_step;
  manifest["n_bins"] = cfg.n_bins;
  manifest["version"] = kVersion;
  const std::string manifest_text = manifest.dump(2);

  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(fnv1a64(manifest_text)));

  const std::filesystem::path csv_path = cfg.out + ".csv";
  const std::filesystem::path manifest_path = cfg.out + ".manifest.json";
  try {
    if (csv_path.has_parent_path())
      std::filesystem::create_directories(csv_path.parent_path());
    std::ofstream csv(csv_path);
    if (!csv) throw Error("cannot open output file " + csv_path.string());
    csv << "# manifest-hash: " << hash << "\n";
    csv << header_for(cfg.experiment) << "\n";
    for (const Row& r : rows) csv << r.text << "\n";
    csv.close();

    std::ofstream mf(manifest_path);
    if (!mf) throw Error("cannot open output file " + manifest_path.string());
    mf << manifest_text << "\n";
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(csv_path, ec);
    std::filesystem::remove(manifest_path, ec);
    throw;
  }
  return manifest_text;
}

}  // namespace dicke
