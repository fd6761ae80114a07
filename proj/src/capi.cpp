#include "dicke/dicke.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "core/bayes.hpp"
#include "core/entanglement.hpp"
#include "core/errors.hpp"
#include "core/experiments.hpp"
#include "core/inference.hpp"
#include "core/verify.hpp"

using namespace dicke;

// Handle definitions. dk_state carries either a proper density matrix or a
// trace-one pseudostate; `physical` records which one it is.
struct dk_state {
  ComplexMatrix matrix;
  int n_qubits = 4;
  bool physical = true;
};
struct dk_dataset {
  Dataset data;
};
struct dk_family {
  ModelFamily family;
};

namespace {

thread_local std::string g_last_error;

dk_status fail(dk_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <typename Fn>
dk_status guarded(Fn&& fn) {
  try {
    fn();
    return DK_OK;
  } catch (const ConfigInvalid& e) {
    return fail(DK_ERR_CONFIG, e.what());
  } catch (const DimensionMismatch& e) {
    return fail(DK_ERR_INVALID_ARGUMENT, e.what());
  } catch (const AlphaOutOfRange& e) {
    return fail(DK_ERR_INVALID_ARGUMENT, e.what());
  } catch (const MaskLengthMismatch& e) {
    return fail(DK_ERR_INVALID_ARGUMENT, e.what());
  } catch (const InvalidPartition& e) {
    return fail(DK_ERR_INVALID_ARGUMENT, e.what());
  } catch (const DesignMismatch& e) {
    return fail(DK_ERR_INVALID_ARGUMENT, e.what());
  } catch (const Error& e) {
    return fail(DK_ERR_NUMERIC, e.what());
  } catch (const std::exception& e) {
    return fail(DK_ERR_UNKNOWN, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

dk_status require(bool cond, const char* message) {
  return cond ? DK_OK : fail(DK_ERR_INVALID_ARGUMENT, message);
}

nlohmann::json fit_to_json(const std::string& name, const FitResult& fit) {
  return {{"name", name},           {"K", fit.k},
          {"theta_hat", fit.theta_hat}, {"loglik", fit.log_likelihood},
          {"aic", fit.aic},         {"aicc", fit.aicc}};
}

}  // namespace

extern "C" {

const char* dk_version(void) { return kVersion; }

const char* dk_last_error(void) { return g_last_error.c_str(); }

void dk_string_free(char* ptr) { delete[] ptr; }

void dk_state_free(dk_state* state) { delete state; }
void dk_dataset_free(dk_dataset* dataset) { delete dataset; }
void dk_family_free(dk_family* family) { delete family; }

dk_status dk_state_noisy_dicke(int excitations, double phi, double alpha,
                               dk_state** out) {
  if (auto s = require(out && (excitations == 1 || excitations == 2),
                       "excitations must be 1 or 2"))
    return s;
  return guarded([&] {
    const DensityMatrix rho = depolarize(target_state(excitations, phi), alpha);
    *out = new dk_state{rho.matrix, rho.n_qubits, true};
  });
}

dk_status dk_state_maximally_mixed(dk_state** out) {
  if (auto s = require(out != nullptr, "null output pointer")) return s;
  return guarded([&] {
    ComplexMatrix m = identity(16);
    for (auto& e : m.data) e /= 16.0;
    *out = new dk_state{std::move(m), 4, true};
  });
}

dk_status dk_state_pseudostate_from_counts(const dk_dataset* dataset,
                                           dk_state** out) {
  if (auto s = require(dataset && out, "null argument")) return s;
  return guarded([&] {
    Pseudostate p = pseudostate_from_counts(dataset->data);
    const bool physical = is_psd(p.matrix, kPsdTol);
    *out = new dk_state{std::move(p.matrix), 4, physical};
  });
}

dk_status dk_state_mle(const dk_dataset* train, int max_iters, double tol,
                       dk_state** out) {
  if (auto s = require(train && out && max_iters > 0, "null argument or bad iteration count"))
    return s;
  return guarded([&] {
    DensityMatrix rho = approx_mle_state(train->data, max_iters, tol);
    *out = new dk_state{std::move(rho.matrix), rho.n_qubits, true};
  });
}

dk_status dk_state_negativities(const dk_state* state, double out_n[3]) {
  if (auto s = require(state && out_n, "null argument")) return s;
  if (auto s = require(state->physical, "negativities are undefined for pseudostates"))
    return s;
  return guarded([&] {
    const DensityMatrix rho{state->matrix, state->n_qubits};
    const NegativityTriple t = generalized_negativities(rho);
    out_n[0] = t.n0;
    out_n[1] = t.n1;
    out_n[2] = t.n2;
  });
}

dk_status dk_state_witness_expectation(const dk_state* state, double* out_value) {
  if (auto s = require(state && out_value, "null argument")) return s;
  return guarded([&] { *out_value = witness_expectation(state->matrix); });
}

dk_status dk_state_is_physical(const dk_state* state, double tol,
                               int* out_physical) {
  if (auto s = require(state && out_physical, "null argument")) return s;
  return guarded([&] { *out_physical = is_psd(state->matrix, tol) ? 1 : 0; });
}

dk_status dk_witness_threshold(int excitations, double* out_alpha) {
  if (auto s = require(out_alpha && (excitations == 1 || excitations == 2),
                       "excitations must be 1 or 2"))
    return s;
  return guarded([&] {
    const PureState psi = dicke_state(excitations);
    *out_alpha = witness_threshold([&](double a) { return depolarize(psi, a); });
  });
}

dk_status dk_dataset_simulate(const char* design_id, const dk_state* state,
                              uint64_t shots, uint64_t seed, dk_dataset** out) {
  if (auto s = require(design_id && state && out, "null argument")) return s;
  return guarded([&] {
    *out = new dk_dataset{
        simulate_dataset(design_by_id(design_id), state->matrix, shots, seed)};
  });
}

dk_status dk_dataset_to_json(const dk_dataset* dataset, char** out_json) {
  if (auto s = require(dataset && out_json, "null argument")) return s;
  return guarded([&] { *out_json = dup_string(dataset_to_json(dataset->data)); });
}

dk_status dk_dataset_from_json(const char* json, dk_dataset** out) {
  if (auto s = require(json && out, "null argument")) return s;
  return guarded([&] { *out = new dk_dataset{dataset_from_json(json)}; });
}

dk_status dk_dataset_split(const dk_dataset* dataset, double fraction,
                           uint64_t seed, dk_dataset** out_first,
                           dk_dataset** out_second) {
  if (auto s = require(dataset && out_first && out_second, "null argument"))
    return s;
  return guarded([&] {
    auto [a, b] = split_dataset(dataset->data, fraction, seed);
    *out_first = new dk_dataset{std::move(a)};
    *out_second = new dk_dataset{std::move(b)};
  });
}

dk_status dk_family_m1(int excitations, double phi, int variable_phi,
                       dk_family** out) {
  if (auto s = require(out && (excitations == 1 || excitations == 2),
                       "excitations must be 1 or 2"))
    return s;
  return guarded([&] {
    *out = new dk_family{model_m1(excitations, phi, variable_phi != 0)};
  });
}

dk_status dk_family_m2(int excitations, double phi, const dk_state* base,
                       dk_family** out) {
  if (auto s = require(base && out && (excitations == 1 || excitations == 2),
                       "null base or bad excitations"))
    return s;
  return guarded([&] {
    if (base->physical) {
      const DensityMatrix rho{base->matrix, base->n_qubits};
      *out = new dk_family{model_m2(excitations, phi, rho)};
    } else {
      const Pseudostate pseudo{base->matrix};
      *out = new dk_family{model_m2(excitations, phi, pseudo)};
    }
  });
}

dk_status dk_fit(const dk_family* family, const dk_dataset* dataset,
                 double grid_step, double refine_tol, char** out_json) {
  if (auto s = require(family && dataset && out_json, "null argument")) return s;
  return guarded([&] {
    FitOptions opts;
    if (grid_step > 0.0) opts.grid_step = grid_step;
    if (refine_tol > 0.0) opts.refine_tol = refine_tol;
    const FitResult fit = fit_mle(family->family, dataset->data, opts);
    *out_json = dup_string(fit_to_json(family->family.name(), fit).dump());
  });
}

dk_status dk_rank(const dk_family* const* families, int n_families,
                  const dk_dataset* dataset, int fpm_k,
                  char** out_report_json) {
  if (auto s = require(families && dataset && out_report_json && n_families > 0,
                       "null argument or empty family list"))
    return s;
  return guarded([&] {
    std::vector<ModelFamily> fams;
    for (int i = 0; i < n_families; ++i) {
      if (!families[i]) throw Error("null family handle");
      fams.push_back(families[i]->family);
    }
    const RankingReport report = rank_models(fams, dataset->data, fpm_k);
    *out_report_json = dup_string(ranking_report_to_json(report));
  });
}

dk_status dk_fpm_loglik_bound(const dk_dataset* dataset, double* out) {
  if (auto s = require(dataset && out, "null argument")) return s;
  return guarded([&] { *out = fpm_loglik_upper_bound(dataset->data); });
}

dk_status dk_cross_model(const dk_dataset* dataset, int excitations, double phi,
                         uint64_t seed, char** out_report_json) {
  if (auto s = require(dataset && out_report_json, "null argument")) return s;
  return guarded([&] {
    const RankingReport report =
        cross_model_protocol(dataset->data, excitations, phi, seed);
    *out_report_json = dup_string(ranking_report_to_json(report));
  });
}

dk_status dk_compare_m1_m2(const dk_dataset* validation, const dk_family* m1,
                           const dk_family* m2, double* out_delta_aic) {
  if (auto s = require(validation && m1 && m2 && out_delta_aic, "null argument"))
    return s;
  return guarded([&] {
    *out_delta_aic = compare_m1_m2(validation->data, m1->family, m2->family);
  });
}

dk_status dk_negativity_posterior(const dk_family* family,
                                  const dk_dataset* dataset, double grid_step,
                                  int monotone, int n_bins, char** out_json) {
  if (auto s = require(family && dataset && out_json, "null argument")) return s;
  if (auto s = require(monotone >= 0 && monotone <= 2, "monotone must be 0, 1 or 2"))
    return s;
  if (auto s = require(n_bins >= 1, "n_bins must be >= 1")) return s;
  return guarded([&] {
    const PosteriorGrid grid =
        posterior_over_params(family->family, dataset->data, grid_step);
    const Monotone which = monotone == 0   ? Monotone::N0
                           : monotone == 1 ? Monotone::N1
                                           : Monotone::N2;
    const MonotonePosterior post =
        negativity_posterior(grid, family->family, which, n_bins);
    nlohmann::json j;
    j["mean"] = post.mean;
    j["ci_low"] = post.ci_low;
    j["ci_high"] = post.ci_high;
    j["bins"] = nlohmann::json::array();
    for (std::size_t b = 0; b < post.bin_weight.size(); ++b)
      j["bins"].push_back({{"left", post.bin_left[b]},
                           {"right", post.bin_right[b]},
                           {"weight", post.bin_weight[b]}});
    *out_json = dup_string(j.dump());
  });
}

dk_status dk_run_experiment(const char* config_json, char** out_manifest_json) {
  if (auto s = require(config_json != nullptr, "null config")) return s;
  return guarded([&] {
    const ExperimentConfig cfg = parse_experiment_config(config_json);
    const std::string manifest = run_experiment(cfg);
    if (out_manifest_json) *out_manifest_json = dup_string(manifest);
  });
}

dk_status dk_verify(const char* level, char** out_report_json,
                    int* out_all_passed) {
  if (auto s = require(level != nullptr, "null level")) return s;
  const std::string lv = level;
  return guarded([&] {
    if (lv != "quick" && lv != "full")
      throw ConfigInvalid("level must be quick or full");
    const auto checks = lv == "quick" ? verify_quick() : verify_full();
    bool all = true;
    nlohmann::json j;
    j["checks"] = nlohmann::json::array();
    for (const CheckResult& c : checks) {
      all &= c.passed;
      j["checks"].push_back(
          {{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    }
    j["all_passed"] = all;
    if (out_report_json) *out_report_json = dup_string(j.dump(2));
    if (out_all_passed) *out_all_passed = all ? 1 : 0;
  });
}

}  // extern "C"
