/* C API for the Dicke-state model-selection library.
 *
 * All functions return a dk_status (DK_OK on success). On failure the
 * thread-local message from dk_last_error() describes the problem and all
 * output parameters are left untouched. Strings returned through char**
 * are heap-allocated and must be released with dk_string_free().
 */
#ifndef DICKE_DICKE_H
#define DICKE_DICKE_H

#include <stdint.h>

#if defined(_WIN32)
#define DK_API __declspec(dllexport)
#else
#define DK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef int dk_status;

enum {
  DK_OK = 0,
  DK_ERR_INVALID_ARGUMENT = 1, /* bad handle, range or dimension */
  DK_ERR_CONFIG = 2,           /* invalid configuration / JSON */
  DK_ERR_NUMERIC = 3,          /* solver or likelihood failure */
  DK_ERR_IO = 4,               /* file system failure */
  DK_ERR_UNKNOWN = 5
};

/* Opaque handles. */
typedef struct dk_state dk_state;     /* density matrix or pseudostate */
typedef struct dk_dataset dk_dataset; /* per-setting outcome counts */
typedef struct dk_family dk_family;   /* few-parameter model family */

DK_API const char* dk_version(void);
DK_API const char* dk_last_error(void);
DK_API void dk_string_free(char* ptr);

DK_API void dk_state_free(dk_state* state);
DK_API void dk_dataset_free(dk_dataset* dataset);
DK_API void dk_family_free(dk_family* family);

/* ---- states ---------------------------------------------------------- */

/* (1-alpha) |psi(phi)><psi(phi)| + alpha I/16 on the four-qubit Dicke
 * target with `excitations` in {1,2}; alpha = 0 gives the pure target. */
DK_API dk_status dk_state_noisy_dicke(int excitations, double phi, double alpha,
                                      dk_state** out);

DK_API dk_status dk_state_maximally_mixed(dk_state** out);

/* Observation pseudostate from collective x/y counts (may be non-PSD). */
DK_API dk_status dk_state_pseudostate_from_counts(const dk_dataset* dataset,
                                                  dk_state** out);

/* Approximate MLE state from product-SIC counts (iterative fixed point). */
DK_API dk_status dk_state_mle(const dk_dataset* train, int max_iters,
                              double tol, dk_state** out);

/* Generalized negativities (N0, N1, N2); rejects pseudostates. */
DK_API dk_status dk_state_negativities(const dk_state* state, double out_n[3]);

DK_API dk_status dk_state_witness_expectation(const dk_state* state,
                                              double* out_value);

/* 1 if min eigenvalue >= -tol. */
DK_API dk_status dk_state_is_physical(const dk_state* state, double tol,
                                      int* out_physical);

/* White-noise level at which the witness expectation changes sign. */
DK_API dk_status dk_witness_threshold(int excitations, double* out_alpha);

/* ---- datasets -------------------------------------------------------- */

/* design_id is "product_sic" or "collective_xy"; shots must divide evenly
 * over the design's settings. Deterministic in (design, state, shots, seed). */
DK_API dk_status dk_dataset_simulate(const char* design_id,
                                     const dk_state* state, uint64_t shots,
                                     uint64_t seed, dk_dataset** out);

DK_API dk_status dk_dataset_to_json(const dk_dataset* dataset, char** out_json);
DK_API dk_status dk_dataset_from_json(const char* json, dk_dataset** out);

/* Shot-level split; parts sum to the original counts exactly. */
DK_API dk_status dk_dataset_split(const dk_dataset* dataset, double fraction,
                                  uint64_t seed, dk_dataset** out_first,
                                  dk_dataset** out_second);

/* ---- model families -------------------------------------------------- */

/* M1: q -> (1-q)|target(phi)><target(phi)| + q I/16 (K = 1, or K = 2 with
 * variable_phi nonzero). */
DK_API dk_status dk_family_m1(int excitations, double phi, int variable_phi,
                              dk_family** out);

/* M2: (eps, q) -> (1-eps)[(1-q) base + q |target(phi)><target(phi)|]
 * + eps I/16 (K = 2). `base` may be a pseudostate; unphysical mixtures are
 * excluded from the model. */
DK_API dk_status dk_family_m2(int excitations, double phi,
                              const dk_state* base, dk_family** out);

/* ---- inference ------------------------------------------------------- */

/* Maximum-likelihood fit; JSON {name, K, theta_hat, loglik, aic, aicc}. */
DK_API dk_status dk_fit(const dk_family* family, const dk_dataset* dataset,
                        double grid_step, double refine_tol, char** out_json);

/* Ranks the families against the FPM likelihood bound with fpm_k
 * parameters; JSON {models:[...], fpm:{...}, delta_aic:[...]}. */
DK_API dk_status dk_rank(const dk_family* const* families, int n_families,
                         const dk_dataset* dataset, int fpm_k,
                         char** out_report_json);

DK_API dk_status dk_fpm_loglik_bound(const dk_dataset* dataset, double* out);

/* Splits once, builds the M2 base from the training half, ranks M2 on the
 * validation half. Returns the same report JSON as dk_rank. */
DK_API dk_status dk_cross_model(const dk_dataset* dataset, int excitations,
                                double phi, uint64_t seed,
                                char** out_report_json);

/* AIC(m2) - AIC(m1) on the identical validation dataset. */
DK_API dk_status dk_compare_m1_m2(const dk_dataset* validation,
                                  const dk_family* m1, const dk_family* m2,
                                  double* out_delta_aic);

/* ---- posteriors ------------------------------------------------------ */

/* Posterior over the family parameters pushed through a negativity
 * monotone (0 -> N0, 1 -> N1, 2 -> N2). Output JSON:
 * {mean, ci_low, ci_high, bins:[{left,right,weight}]}. */
DK_API dk_status dk_negativity_posterior(const dk_family* family,
                                         const dk_dataset* dataset,
                                         double grid_step, int monotone,
                                         int n_bins, char** out_json);

/* ---- experiments ----------------------------------------------------- */

/* Runs one experiment sweep from a config JSON object; writes
 * <out>.csv and <out>.manifest.json and returns the manifest text. */
DK_API dk_status dk_run_experiment(const char* config_json,
                                   char** out_manifest_json);

/* level is "quick" or "full". Report JSON:
 * {checks:[{name, passed, detail}], all_passed}. */
DK_API dk_status dk_verify(const char* level, char** out_report_json,
                           int* out_all_passed);

#ifdef __cplusplus
}
#endif

#endif /* DICKE_DICKE_H */
