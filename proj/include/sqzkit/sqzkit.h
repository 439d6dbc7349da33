/*
 * sqzkit: modelling, simulation and parameter estimation for cavity-enhanced
 * squeezed-light sources operated below threshold.
 *
 * C interface. Every fallible call returns an sqz_status; on failure a
 * human-readable message is available from sqz_last_error() on the same
 * thread until the next failing call. Opaque handles are owned by the caller
 * and released with the matching *_free function (NULL is accepted).
 *
 * Conventions: noise variances are linear relative to shot noise = 1; dB
 * values are 10*log10(V), so squeezing is negative. Reflectivities and
 * efficiencies are power fractions.
 */
#ifndef SQZKIT_H
#define SQZKIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SQZKIT_BUILDING)
#    define SQZ_API __declspec(dllexport)
#  else
#    define SQZ_API __declspec(dllimport)
#  endif
#else
#  define SQZ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sqz_status {
  SQZ_OK = 0,
  SQZ_ERR_INVALID_ARGUMENT = 1,
  SQZ_ERR_DOMAIN = 2,
  SQZ_ERR_ABOVE_THRESHOLD = 3,
  SQZ_ERR_PARSE = 4,
  SQZ_ERR_IO = 5,
  SQZ_ERR_NOT_CONVERGED = 6,
  SQZ_ERR_INFEASIBLE = 7,
  SQZ_ERR_SCHEMA = 8,
  SQZ_ERR_INTERNAL = 99
} sqz_status;

SQZ_API const char* sqz_version(void);
SQZ_API const char* sqz_status_name(sqz_status status);
SQZ_API const char* sqz_last_error(void);

/* Strings allocated by the library (the *_to_csv family). */
SQZ_API void sqz_string_free(char* s);

/* ---------------------------------------------------------------- cavity */

typedef struct sqz_cavity_spec {
  double length_mm;       /* one-way physical length */
  double ref_index;       /* phase index */
  double loss_db_per_cm;  /* propagation loss */
  double r_out;           /* output coupler reflectivity, (0,1) */
  double r_hr;            /* back mirror reflectivity, (0,1] */
  int loss_passes;        /* medium passes per round trip: 1 or 2 */
} sqz_cavity_spec;

typedef struct sqz_cavity_rates {
  double tau_s;
  double gamma_coup;
  double gamma_hr;
  double gamma_loss;
  double gamma_tot;
  double eta_esc;
  double fwhm_hz;
  double fsr_hz;
} sqz_cavity_rates;

typedef enum sqz_probe_side { SQZ_PROBE_COUPLER = 0, SQZ_PROBE_HR = 1 } sqz_probe_side;

/* 8 mm, n = 2.138, 0.13 dB/cm, R = 0.77 / 0.99, double pass. */
SQZ_API void sqz_cavity_spec_default(sqz_cavity_spec* spec);
SQZ_API sqz_status sqz_round_trip_time(const sqz_cavity_spec* spec, double* tau_s);
SQZ_API sqz_status sqz_decay_rates(const sqz_cavity_spec* spec, sqz_cavity_rates* rates);
SQZ_API sqz_status sqz_airy_response(const sqz_cavity_spec* spec, sqz_probe_side side, int on_resonance,
                                     double* transmission, double* reflection);
SQZ_API sqz_status sqz_length_for_escape(const sqz_cavity_spec* spec, double target_eta_esc, double* length_mm);

/* ------------------------------------------------------------------- opo */

typedef struct sqz_squeezer_state {
  double pump_ratio; /* P / P_th in [0,1) */
  double eta_esc;
  double eta_det;
} sqz_squeezer_state;

typedef struct sqz_quadrature_pair {
  double v_minus;
  double v_plus;
  double sqz_db;
  double antisqz_db;
} sqz_quadrature_pair;

SQZ_API sqz_status sqz_parametric_gain(double pump_ratio, double* g_plus, double* g_minus);
SQZ_API sqz_status sqz_variances(const sqz_squeezer_state* state, sqz_quadrature_pair* pair);
SQZ_API sqz_status sqz_infer_from_pair(double sqz_db, double antisqz_db, double* eta_total, double* pump_ratio);
SQZ_API sqz_status sqz_squeezing_spectrum(const sqz_squeezer_state* state, const sqz_cavity_rates* rates,
                                          double sideband_hz, sqz_quadrature_pair* pair);
SQZ_API sqz_status sqz_db_from_linear(double v, double* db);
SQZ_API double sqz_linear_from_db(double db);

/* ---------------------------------------------------------------- budget */

typedef struct sqz_detection_chain {
  double visibility; /* enters squared */
  double eta_prop;
  double eta_pd;
} sqz_detection_chain;

typedef struct sqz_budget_stage {
  const char* name; /* owned by the report */
  double transmission;
  double cumulative;
} sqz_budget_stage;

typedef struct sqz_budget sqz_budget;

SQZ_API sqz_status sqz_eta_det(const sqz_detection_chain* chain, double* eta_det);
SQZ_API sqz_status sqz_eta_total(const sqz_detection_chain* chain, const sqz_cavity_rates* rates, double* eta_total);
/* measured may be NULL. */
SQZ_API sqz_status sqz_budget_report(const sqz_detection_chain* chain, const sqz_cavity_rates* rates,
                                     const sqz_quadrature_pair* measured, sqz_budget** out);
SQZ_API size_t sqz_budget_stage_count(const sqz_budget* b);
SQZ_API sqz_status sqz_budget_stage_at(const sqz_budget* b, size_t index, sqz_budget_stage* stage);
SQZ_API double sqz_budget_modeled_eta_total(const sqz_budget* b);
/* Returns 1 and fills the outputs when a measured pair was supplied, else 0. */
SQZ_API int sqz_budget_residual(const sqz_budget* b, double* inferred_eta_total, double* residual);
SQZ_API void sqz_budget_free(sqz_budget* b);

/* ------------------------------------------------------ data and fitting */

typedef enum sqz_data_kind { SQZ_DATA_GAIN = 0, SQZ_DATA_SQUEEZE = 1, SQZ_DATA_FP_RESPONSE = 2 } sqz_data_kind;

typedef struct sqz_dataset sqz_dataset;

SQZ_API sqz_status sqz_dataset_load_csv(const char* path, sqz_data_kind kind, sqz_dataset** out);
SQZ_API sqz_status sqz_dataset_parse_csv(const char* text, sqz_data_kind kind, sqz_dataset** out);
SQZ_API sqz_status sqz_dataset_to_csv(const sqz_dataset* data, char** text);
SQZ_API sqz_data_kind sqz_dataset_kind(const sqz_dataset* data);
SQZ_API size_t sqz_dataset_rows(const sqz_dataset* data);
SQZ_API void sqz_dataset_free(sqz_dataset* data);

typedef struct sqz_fit_options {
  double grad_tol;
  double step_tol;
  int max_iter; /* per start */
  int starts;
  uint64_t seed;
} sqz_fit_options;

typedef struct sqz_fit_result sqz_fit_result;

typedef struct sqz_cavity_knowns {
  double r_out;
  double length_mm;
  double ref_index;
  int loss_passes;
} sqz_cavity_knowns;

SQZ_API void sqz_fit_options_default(sqz_fit_options* opts);

/* A fit that runs but does not converge still returns SQZ_OK; check
 * sqz_fit_converged() and sqz_fit_diagnostic(). opts may be NULL. */
SQZ_API sqz_status sqz_fit_gain(const sqz_dataset* data, const sqz_fit_options* opts, sqz_fit_result** out);
SQZ_API sqz_status sqz_fit_squeeze(const sqz_dataset* data, double eta_esc, double eta_det, int free_eta_det,
                                   const sqz_fit_options* opts, sqz_fit_result** out);
SQZ_API sqz_status sqz_characterize_cavity(const sqz_dataset* data, const sqz_cavity_knowns* known,
                                           sqz_probe_side side, const sqz_fit_options* opts, sqz_fit_result** out);

SQZ_API int sqz_fit_converged(const sqz_fit_result* fit);
SQZ_API size_t sqz_fit_param_count(const sqz_fit_result* fit);
SQZ_API sqz_status sqz_fit_param_at(const sqz_fit_result* fit, size_t index, const char** name, double* value,
                                    double* std_err);
SQZ_API sqz_status sqz_fit_param(const sqz_fit_result* fit, const char* name, double* value, double* std_err);
SQZ_API double sqz_fit_rss(const sqz_fit_result* fit);
SQZ_API int sqz_fit_iterations(const sqz_fit_result* fit);
SQZ_API const char* sqz_fit_diagnostic(const sqz_fit_result* fit);
SQZ_API size_t sqz_fit_residual_count(const sqz_fit_result* fit);
SQZ_API const double* sqz_fit_residuals(const sqz_fit_result* fit);
SQZ_API void sqz_fit_result_free(sqz_fit_result* fit);

/* -------------------------------------------------------------- simtrace */

typedef enum sqz_phase_mode { SQZ_PHASE_SCANNED = 0, SQZ_PHASE_DRIFT = 1, SQZ_PHASE_FIXED = 2 } sqz_phase_mode;
typedef enum sqz_scan_waveform { SQZ_WAVE_TRIANGLE = 0, SQZ_WAVE_SAWTOOTH = 1 } sqz_scan_waveform;

typedef struct sqz_trace_config {
  sqz_squeezer_state state;
  double duration_s;
  double sample_rate;
  sqz_phase_mode phase_mode;
  double scan_period_s;
  sqz_scan_waveform waveform;
  double drift_diffusion; /* rad^2/s; <= 0 picks pi^2 / duration */
  double theta;           /* fixed mode */
  double phase_jitter_rad;
  double rbw_hz;
  double vbw_hz;
  double dark_clearance_db;
  int shot_averages;
  uint64_t seed;
} sqz_trace_config;

typedef struct sqz_trace_row {
  double time_s;
  double phase_rad; /* NaN when unknown */
  double raw_power;
  double raw_db;
  double corrected_db; /* NaN when !corrected_valid */
  int corrected_valid;
} sqz_trace_row;

typedef struct sqz_trace sqz_trace;

/* 1 s at 1 kS/s, scanned triangle 0.5 s, RBW 20 kHz, VBW 10 Hz, 12 dB dark
 * clearance, 20 shot averages, seed 1. state is zeroed (pump off, eta = 1). */
SQZ_API void sqz_trace_config_default(sqz_trace_config* cfg);
SQZ_API double sqz_variance_at_phase(const sqz_quadrature_pair* pair, double theta);
SQZ_API sqz_status sqz_simulate(const sqz_trace_config* cfg, sqz_trace** shot, sqz_trace** squeeze);
/* Builds a trace from raw linear powers (dark included). */
SQZ_API sqz_status sqz_trace_from_powers(const double* raw_power, size_t n, double dark_power, sqz_trace** out);
SQZ_API sqz_status sqz_dark_correct(const sqz_trace* raw, const sqz_trace* shot, sqz_trace** out);
SQZ_API size_t sqz_trace_size(const sqz_trace* trace);
SQZ_API sqz_status sqz_trace_row_at(const sqz_trace* trace, size_t index, sqz_trace_row* row);
SQZ_API double sqz_trace_dark_power(const sqz_trace* trace);
SQZ_API sqz_status sqz_trace_to_csv(const sqz_trace* trace, char** text);
SQZ_API sqz_status sqz_trace_write_csv(const sqz_trace* trace, const char* path);
SQZ_API sqz_status sqz_simulate_sweep(const sqz_trace_config* base, const double* pump_mw, size_t n, double p_th_mw,
                                      sqz_dataset** out);
SQZ_API void sqz_trace_free(sqz_trace* trace);

/* ---------------------------------------------------------------- design */

typedef struct sqz_design_space {
  sqz_cavity_spec base;
  sqz_detection_chain chain;
  double pump_available_w;
  double e_nl; /* W^-1 */
  double r_out_lo;
  double r_out_hi;
  double r_out_step;
  double clip_ratio;
} sqz_design_space;

typedef struct sqz_prediction {
  double r_out;
  double eta_esc;
  double p_th_w;
  double pump_ratio;
  int clipped;
  double sqz_db;
  double antisqz_db;
  double produced_sqz_db;
  double produced_antisqz_db;
} sqz_prediction;

typedef struct sqz_sweep sqz_sweep;

SQZ_API sqz_status sqz_threshold_power(const sqz_cavity_spec* spec, double e_nl, double* p_th_w);
SQZ_API sqz_status sqz_calibrate_enl(const sqz_cavity_spec* spec, double p_th_w, double* e_nl);
SQZ_API sqz_status sqz_predict(const sqz_design_space* space, double r_out, int strict, sqz_prediction* out);
SQZ_API sqz_status sqz_optimize_coupler(const sqz_design_space* space, int strict, sqz_sweep** out);
SQZ_API size_t sqz_sweep_size(const sqz_sweep* sweep);
SQZ_API sqz_status sqz_sweep_row_at(const sqz_sweep* sweep, size_t index, sqz_prediction* row);
SQZ_API double sqz_sweep_best_r_out(const sqz_sweep* sweep);
SQZ_API size_t sqz_sweep_best_index(const sqz_sweep* sweep);
SQZ_API sqz_status sqz_sweep_to_csv(const sqz_sweep* sweep, char** text);
SQZ_API void sqz_sweep_free(sqz_sweep* sweep);

/* ---------------------------------------------------------------- config */

typedef struct sqz_config sqz_config;

SQZ_API sqz_status sqz_config_load(const char* path, sqz_config** out);
SQZ_API sqz_status sqz_config_parse(const char* json_text, sqz_config** out);
SQZ_API void sqz_config_cavity(const sqz_config* cfg, sqz_cavity_spec* spec);
SQZ_API void sqz_config_detection(const sqz_config* cfg, sqz_detection_chain* chain);
SQZ_API int sqz_config_has_pump(const sqz_config* cfg);
/* Fills power, threshold and nonlinearity, deriving whichever was not given. */
SQZ_API sqz_status sqz_config_pump(const sqz_config* cfg, double* power_mw, double* p_th_mw, double* e_nl_per_w);
SQZ_API sqz_status sqz_config_trace(const sqz_config* cfg, sqz_trace_config* trace);
SQZ_API sqz_status sqz_config_design(const sqz_config* cfg, sqz_design_space* space);
SQZ_API void sqz_config_free(sqz_config* cfg);

#ifdef __cplusplus
}
#endif

#endif /* SQZKIT_H */
