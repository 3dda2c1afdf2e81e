/* C interface to the squeeze simulation library.
 *
 * Every function returns a squeeze_status; on failure the message of the
 * calling thread's most recent error is available from squeeze_last_error().
 * Strings returned through char** are owned by the caller and released with
 * squeeze_string_free(). */
#ifndef SQUEEZE_C_H
#define SQUEEZE_C_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(SQUEEZE_BUILDING)
#define SQUEEZE_API __declspec(dllexport)
#else
#define SQUEEZE_API __declspec(dllimport)
#endif
#else
#define SQUEEZE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum squeeze_status {
  SQUEEZE_OK = 0,
  SQUEEZE_ERR_NON_POSITIVE = 1,
  SQUEEZE_ERR_PHI_OUT_OF_RANGE = 2,
  SQUEEZE_ERR_UNKNOWN_PRESET = 3,
  SQUEEZE_ERR_NEGATIVE_OCCUPATION = 4,
  SQUEEZE_ERR_UNSTABLE_REGIME = 5,
  SQUEEZE_ERR_NON_FINITE_RESULT = 6,
  SQUEEZE_ERR_NEGATIVE_TIME = 7,
  SQUEEZE_ERR_OUT_OF_REGIME = 8,
  SQUEEZE_ERR_DEGENERATE_BRANCH = 9,
  SQUEEZE_ERR_SINGULAR_COVARIANCE = 10,
  SQUEEZE_ERR_FIT_FAILED = 11,
  SQUEEZE_ERR_STEP_TOO_LARGE = 12,
  SQUEEZE_ERR_INVALID_ARGUMENT = 13,
  SQUEEZE_ERR_PARSE = 14,
  SQUEEZE_ERR_IO = 15,
  SQUEEZE_ERR_INTERNAL = 99
} squeeze_status;

typedef struct squeeze_params squeeze_params;
typedef struct squeeze_trajectory squeeze_trajectory;

typedef struct squeeze_sample {
  double t;
  double var_XL, var_PL;
  double var_XM, var_PM, var_YM, var_anti;
  double theta, cov_XMPM, det_mech;
  double cross_norm;
  double mean[4];
} squeeze_sample;

typedef struct squeeze_run_options {
  int freeze;                  /* nonzero: squeezing phase followed by frozen intervals */
  double freeze_mech_periods;  /* post-switch span in mechanical periods (freeze only) */
  double t_end;                /* <= 0: 1.5 t_s in the stable regime, 2 pi / omega_m otherwise */
  double record_every;         /* interior sampling step, 0 for event boundaries only */
} squeeze_run_options;

typedef struct squeeze_range {
  double lo, hi;
  int n;
} squeeze_range;

SQUEEZE_API const char* squeeze_version(void);
SQUEEZE_API const char* squeeze_last_error(void);
SQUEEZE_API const char* squeeze_status_name(squeeze_status status);
SQUEEZE_API void squeeze_string_free(char* s);
SQUEEZE_API void squeeze_run_options_default(squeeze_run_options* opts);

/* Parameters. Keys: omega_m, G, g, delta0_prime, kappa, gamma, n_th, n_m, phi, t0. */
SQUEEZE_API squeeze_status squeeze_params_create(squeeze_params** out);
SQUEEZE_API squeeze_status squeeze_params_from_preset(const char* name, squeeze_params** out);
/* Scenario text: "key = value" lines, '#' comments, optional "preset = name". */
SQUEEZE_API squeeze_status squeeze_params_from_scenario(const char* text, squeeze_params** out);
SQUEEZE_API squeeze_status squeeze_params_load(const char* path, squeeze_params** out);
SQUEEZE_API void squeeze_params_destroy(squeeze_params* p);
SQUEEZE_API squeeze_status squeeze_params_set(squeeze_params* p, const char* key, double value);
/* "key=value"; value may be written with pi, e.g. "phi=-pi/2". */
SQUEEZE_API squeeze_status squeeze_params_override(squeeze_params* p, const char* assignment);
SQUEEZE_API squeeze_status squeeze_params_get(const squeeze_params* p, const char* key, double* out);
/* Hard errors as status; soft approximation warnings as a JSON array. */
SQUEEZE_API squeeze_status squeeze_params_validate(const squeeze_params* p, char** warnings_json);
SQUEEZE_API squeeze_status squeeze_params_to_json(const squeeze_params* p, char** json);

/* Gaussian simulation from the thermal initial state (vacuum optics). */
SQUEEZE_API squeeze_status squeeze_simulate(const squeeze_params* p, const squeeze_run_options* opts,
                                            squeeze_trajectory** out);
SQUEEZE_API void squeeze_trajectory_destroy(squeeze_trajectory* t);
SQUEEZE_API size_t squeeze_trajectory_size(const squeeze_trajectory* t);
SQUEEZE_API squeeze_status squeeze_trajectory_sample(const squeeze_trajectory* t, size_t index, squeeze_sample* out);
SQUEEZE_API squeeze_status squeeze_trajectory_min(const squeeze_trajectory* t, squeeze_sample* out);
/* NaN when the schedule has no switch. */
SQUEEZE_API double squeeze_trajectory_switch_time(const squeeze_trajectory* t);
SQUEEZE_API squeeze_status squeeze_trajectory_write_csv(const squeeze_trajectory* t, const char* path);
SQUEEZE_API squeeze_status squeeze_trajectory_write_json(const squeeze_trajectory* t, const char* path);
SQUEEZE_API squeeze_status squeeze_trajectory_schedule_text(const squeeze_trajectory* t, char** text);

/* Maximum relative deviation of (var_XM, var_PM) between the covariance
 * propagation and the independent moment integration over the same run. */
SQUEEZE_API squeeze_status squeeze_oracle_check(const squeeze_params* p, const squeeze_run_options* opts,
                                                double* max_rel_deviation);

/* Optical and mechanical Wigner fields at time t, written as CSV + JSON. */
SQUEEZE_API squeeze_status squeeze_wigner(const squeeze_params* p, double t, const char* outdir, char** manifest_json);

SQUEEZE_API squeeze_status squeeze_sweep(const squeeze_params* base, double phi, squeeze_range G, squeeze_range t0,
                                         unsigned threads, const char* out_csv, char** summary_json);

/* kind: "angles" or "intervals". */
SQUEEZE_API squeeze_status squeeze_montecarlo(const squeeze_params* base, const char* kind, double sigma_frac,
                                              int events, uint64_t seed, unsigned threads, const char* outdir,
                                              char** summary_json);

/* Closed-form quantities; args_json supplies extra inputs such as {"t": 1.0}.
 * quantity: effective_model, squeezing_limit, variance_evolution,
 * exact_solution, steady_state, parametric_theory, intracavity_photons,
 * power_for_photons, strong_coupling_photons. */
SQUEEZE_API squeeze_status squeeze_analytic(const squeeze_params* p, const char* quantity, const char* args_json,
                                            char** result_json);

/* name: fig2, fig3, fig4ab, fig4cd, fig5. */
SQUEEZE_API squeeze_status squeeze_run_figure(const char* name, const char* outdir, unsigned threads,
                                              char** manifest_json);

#ifdef __cplusplus
}
#endif

#endif /* SQUEEZE_C_H */
