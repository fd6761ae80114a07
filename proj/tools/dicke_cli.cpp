// Command-line front end; everything goes through the shared C API.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dicke/dicke.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitConfigError = 2;

struct StateDeleter {
  void operator()(dk_state* p) const { dk_state_free(p); }
};
struct DatasetDeleter {
  void operator()(dk_dataset* p) const { dk_dataset_free(p); }
};
struct FamilyDeleter {
  void operator()(dk_family* p) const { dk_family_free(p); }
};
using StatePtr = std::unique_ptr<dk_state, StateDeleter>;
using DatasetPtr = std::unique_ptr<dk_dataset, DatasetDeleter>;
using FamilyPtr = std::unique_ptr<dk_family, FamilyDeleter>;

std::string take_string(char* raw) {
  std::string s = raw ? raw : "";
  dk_string_free(raw);
  return s;
}

[[noreturn]] void die(dk_status status) {
  std::cerr << "error: " << dk_last_error() << "\n";
  std::exit(status == DK_ERR_CONFIG ? kExitConfigError : kExitCheckFailure);
}

void check(dk_status status) {
  if (status != DK_OK) die(status);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot read " << path << "\n";
    std::exit(kExitConfigError);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_simulate(const std::string& config_path, const std::string& experiment,
                 const std::vector<std::uint64_t>& shots,
                 const std::vector<double>& phi,
                 const std::vector<std::uint64_t>& seeds,
                 const std::string& out) {
  nlohmann::json cfg = nlohmann::json::object();
  if (!config_path.empty()) {
    try {
      cfg = nlohmann::json::parse(read_file(config_path));
    } catch (const nlohmann::json::exception& e) {
      std::cerr << "error: config is not valid JSON: " << e.what() << "\n";
      return kExitConfigError;
    }
  }
  if (!experiment.empty()) cfg["experiment"] = experiment;
  if (!shots.empty()) cfg["N"] = shots;
  if (!phi.empty()) cfg["phi"] = phi;
  if (!seeds.empty()) cfg["seeds"] = seeds;
  if (!out.empty()) cfg["out"] = out;

  char* manifest = nullptr;
  check(dk_run_experiment(cfg.dump().c_str(), &manifest));
  std::cout << take_string(manifest) << "\n";
  return kExitOk;
}

int run_rank(const std::string& design, int excitations, double alpha,
             const std::vector<double>& phi, bool variable_phi,
             std::uint64_t shots, std::uint64_t seed, const std::string& out) {
  StatePtr truth;
  {
    dk_state* raw = nullptr;
    check(dk_state_noisy_dicke(excitations, 0.0, alpha, &raw));
    truth.reset(raw);
  }
  DatasetPtr data;
  {
    dk_dataset* raw = nullptr;
    check(dk_dataset_simulate(design.c_str(), truth.get(), shots, seed, &raw));
    data.reset(raw);
  }
  std::vector<FamilyPtr> families;
  std::vector<const dk_family*> raw_families;
  for (double p : phi) {
    dk_family* raw = nullptr;
    check(dk_family_m1(excitations, p, variable_phi ? 1 : 0, &raw));
    families.emplace_back(raw);
    raw_families.push_back(raw);
  }
  const int fpm_k = design == "product_sic" ? 255 : 30;
  char* report = nullptr;
  check(dk_rank(raw_families.data(), static_cast<int>(raw_families.size()),
                data.get(), fpm_k, &report));
  const std::string text = take_string(report);
  if (out.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream f(out);
    f << text << "\n";
  }
  return kExitOk;
}

int run_posterior(int excitations, double alpha, double phi, bool use_m2,
                  std::uint64_t shots, std::uint64_t seed, int monotone,
                  double grid_step, int n_bins, const std::string& out) {
  StatePtr truth;
  {
    dk_state* raw = nullptr;
    check(dk_state_noisy_dicke(excitations, 0.0, alpha, &raw));
    truth.reset(raw);
  }
  DatasetPtr data;
  {
    dk_dataset* raw = nullptr;
    check(dk_dataset_simulate("collective_xy", truth.get(), shots, seed, &raw));
    data.reset(raw);
  }

  FamilyPtr family;
  DatasetPtr scored;
  if (use_m2) {
    dk_dataset* train = nullptr;
    dk_dataset* valid = nullptr;
    check(dk_dataset_split(data.get(), 0.5, seed + 1, &train, &valid));
    DatasetPtr train_ptr(train);
    scored.reset(valid);
    dk_state* base = nullptr;
    check(dk_state_pseudostate_from_counts(train, &base));
    StatePtr base_ptr(base);
    dk_family* raw = nullptr;
    check(dk_family_m2(excitations, phi, base, &raw));
    family.reset(raw);
  } else {
    scored = std::move(data);
    dk_family* raw = nullptr;
    check(dk_family_m1(excitations, phi, 0, &raw));
    family.reset(raw);
  }

  char* report = nullptr;
  check(dk_negativity_posterior(family.get(), scored.get(), grid_step, monotone,
                                n_bins, &report));
  const std::string text = take_string(report);
  if (out.empty()) {
    std::cout << text << "\n";
    return kExitOk;
  }
  const auto j = nlohmann::json::parse(text);
  std::ofstream csv(out + ".csv");
  csv << "bin_left,bin_right,weight\n";
  char buf[96];
  for (const auto& bin : j["bins"]) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n",
                  bin["left"].get<double>(), bin["right"].get<double>(),
                  bin["weight"].get<double>());
    csv << buf;
  }
  std::ofstream summary(out + ".summary.json");
  summary << nlohmann::json{{"mean", j["mean"]},
                            {"ci_low", j["ci_low"]},
                            {"ci_high", j["ci_high"]}}
                 .dump()
          << "\n";
  return kExitOk;
}

int run_physmap(double alpha, double phi, const std::vector<std::uint64_t>& shots,
                std::uint64_t seed, double grid_step, const std::string& out) {
  nlohmann::json cfg;
  cfg["experiment"] = "fig6";
  cfg["alpha"] = alpha;
  cfg["phi"] = std::vector<double>{phi};
  if (!shots.empty()) cfg["N"] = shots;
  cfg["seeds"] = std::vector<std::uint64_t>{seed};
  cfg["grid_step"] = grid_step;
  cfg["out"] = out;
  char* manifest = nullptr;
  check(dk_run_experiment(cfg.dump().c_str(), &manifest));
  std::cout << take_string(manifest) << "\n";
  return kExitOk;
}

int run_verify(const std::string& level) {
  char* report = nullptr;
  int all_passed = 0;
  check(dk_verify(level.c_str(), &report, &all_passed));
  const auto j = nlohmann::json::parse(take_string(report));
  for (const auto& c : j["checks"]) {
    std::cout << (c["passed"].get<bool>() ? "[PASS] " : "[FAIL] ")
              << c["name"].get<std::string>() << ": "
              << c["detail"].get<std::string>() << "\n";
  }
  return all_passed ? kExitOk : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dicke-state tomography and AIC model selection toolkit"};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand(
      "simulate", "Run an experiment sweep from a JSON config (CSV output)");
  std::string config_path, experiment, out;
  std::vector<std::uint64_t> shots_list, seeds;
  std::vector<double> phi_list;
  simulate->add_option("--config", config_path, "Config JSON file");
  simulate->add_option("--experiment", experiment,
                       "Experiment id (fig1a..fig8), overrides config");
  simulate->add_option("--N", shots_list, "Shot counts, overrides config");
  simulate->add_option("--phi", phi_list, "Phase values, overrides config");
  simulate->add_option("--seed", seeds, "Seeds, overrides config");
  simulate->add_option("--out", out, "Output path prefix");

  // rank
  auto* rank = app.add_subcommand("rank", "Rank M1 families against the FPM bound");
  std::string design = "product_sic";
  int excitations = 2;
  double alpha = 0.2;
  std::vector<double> rank_phi{0.0};
  bool variable_phi = false;
  std::uint64_t rank_shots = 1000, rank_seed = 1;
  std::string rank_out;
  rank->add_option("--design", design, "product_sic or collective_xy");
  rank->add_option("--excitations", excitations, "1 or 2");
  rank->add_option("--alpha", alpha, "White-noise level of the true state");
  rank->add_option("--phi", rank_phi, "Model target phases (one family each)");
  rank->add_flag("--variable-phi", variable_phi, "Fit phi as a parameter (K=2)");
  rank->add_option("--N", rank_shots, "Total shots");
  rank->add_option("--seed", rank_seed, "RNG seed");
  rank->add_option("--out", rank_out, "Write report JSON here (default stdout)");

  // posterior
  auto* posterior =
      app.add_subcommand("posterior", "Negativity posterior from witness data");
  int post_exc = 2, n_bins = 50;
  double post_alpha = 0.2, post_phi = 0.0, grid_step = 0.01;
  bool use_m2 = false;
  std::uint64_t post_shots = 1000, post_seed = 1;
  std::string monotone = "n0", post_out;
  posterior->add_option("--excitations", post_exc, "1 or 2");
  posterior->add_option("--alpha", post_alpha, "White-noise level of the true state");
  posterior->add_option("--phi", post_phi, "Model target phase");
  posterior->add_flag("--m2", use_m2,
                      "Cross-model M2 (base from the training half)");
  posterior->add_option("--N", post_shots, "Total shots");
  posterior->add_option("--seed", post_seed, "RNG seed");
  posterior->add_option("--monotone", monotone, "n0, n1 or n2");
  posterior->add_option("--grid-step", grid_step, "Parameter grid step");
  posterior->add_option("--bins", n_bins, "Histogram bins");
  posterior->add_option("--out", post_out,
                        "Output prefix (<out>.csv, <out>.summary.json)");

  // physmap
  auto* physmap =
      app.add_subcommand("physmap", "Physicality map of the M2 witness model");
  double pm_alpha = 0.2, pm_phi = 0.0, pm_step = 0.01;
  std::vector<std::uint64_t> pm_shots;
  std::uint64_t pm_seed = 1;
  std::string pm_out = "physmap";
  physmap->add_option("--alpha", pm_alpha, "White-noise level of the true state");
  physmap->add_option("--phi", pm_phi, "Model target phase");
  physmap->add_option("--N", pm_shots, "Shot counts");
  physmap->add_option("--seed", pm_seed, "RNG seed");
  physmap->add_option("--grid-step", pm_step, "Grid step in epsilon and q");
  physmap->add_option("--out", pm_out, "Output path prefix");

  // verify
  auto* verify = app.add_subcommand("verify", "Run the built-in check suite");
  std::string level = "quick";
  verify->add_option("--level", level, "quick or full")
      ->check(CLI::IsMember({"quick", "full"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  if (simulate->parsed())
    return run_simulate(config_path, experiment, shots_list, phi_list, seeds, out);
  if (rank->parsed())
    return run_rank(design, excitations, alpha, rank_phi, variable_phi,
                    rank_shots, rank_seed, rank_out);
  if (posterior->parsed()) {
    if (monotone != "n0" && monotone != "n1" && monotone != "n2") {
      std::cerr << "error: --monotone must be n0, n1 or n2\n";
      return kExitConfigError;
    }
    const int mono = monotone == "n0" ? 0 : monotone == "n1" ? 1 : 2;
    return run_posterior(post_exc, post_alpha, post_phi, use_m2, post_shots,
                         post_seed, mono, grid_step, n_bins, post_out);
  }
  if (physmap->parsed())
    return run_physmap(pm_alpha, pm_phi, pm_shots, pm_seed, pm_step, pm_out);
  if (verify->parsed()) return run_verify(level);
  return kExitConfigError;
}
