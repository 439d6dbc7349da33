#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <optional>
#include <span>
#include <sqzkit/sqzkit.h>
#include <string>

#include "budget.hpp"
#include "cavity.hpp"
#include "config.hpp"
#include "dataset.hpp"
#include "design.hpp"
#include "error.hpp"
#include "fitters.hpp"
#include "opo.hpp"
#include "simtrace.hpp"

struct sqz_budget {
  sqz::BudgetReport report;
};
struct sqz_dataset {
  sqz::DataSet data;
};
struct sqz_fit_result {
  sqz::FitResult fit;
};
struct sqz_trace {
  sqz::Trace trace;
};
struct sqz_sweep {
  sqz::CouplerSweep sweep;
};
struct sqz_config {
  sqz::RunConfig config;
};

namespace {

thread_local std::string g_last_error;

template <class F>
sqz_status guarded(F&& body) noexcept {
  try {
    body();
    return SQZ_OK;
  } catch (const sqz::Error& e) {
    g_last_error = e.what();
    return static_cast<sqz_status>(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SQZ_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SQZ_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return SQZ_ERR_INTERNAL;
  }
}

template <class... P>
void non_null(const P*... ptrs) {
  if (((ptrs == nullptr) || ...)) sqz::fail(sqz::ErrorCode::InvalidArgument, "required pointer argument is NULL");
}

sqz::CavitySpec from_c(const sqz_cavity_spec& c) {
  sqz::CavitySpec s;
  s.length_mm = c.length_mm;
  s.ref_index = c.ref_index;
  s.loss_db_per_cm = c.loss_db_per_cm;
  s.r_out = c.r_out;
  s.r_hr = c.r_hr;
  s.loss_passes = c.loss_passes;
  return s;
}

sqz_cavity_spec to_c(const sqz::CavitySpec& s) {
  return {s.length_mm, s.ref_index, s.loss_db_per_cm, s.r_out, s.r_hr, s.loss_passes};
}

sqz::CavityRates from_c(const sqz_cavity_rates& c) {
  return {c.tau_s, c.gamma_coup, c.gamma_hr, c.gamma_loss, c.gamma_tot, c.eta_esc, c.fwhm_hz, c.fsr_hz};
}

sqz_cavity_rates to_c(const sqz::CavityRates& r) {
  return {r.tau, r.gamma_coup, r.gamma_hr, r.gamma_loss, r.gamma_tot, r.eta_esc, r.fwhm_bandwidth, r.fsr};
}

sqz::SqueezerState from_c(const sqz_squeezer_state& s) { return {s.pump_ratio, s.eta_esc, s.eta_det}; }
sqz_squeezer_state to_c(const sqz::SqueezerState& s) { return {s.pump_ratio, s.eta_esc, s.eta_det}; }

sqz_quadrature_pair to_c(const sqz::QuadraturePair& q) { return {q.v_minus, q.v_plus, q.sqz_db, q.antisqz_db}; }

sqz::DetectionChain from_c(const sqz_detection_chain& c) { return {c.visibility, c.eta_prop, c.eta_pd}; }
sqz_detection_chain to_c(const sqz::DetectionChain& c) { return {c.visibility, c.eta_prop, c.eta_pd}; }

sqz::ProbeSide from_c(sqz_probe_side side) {
  switch (side) {
    case SQZ_PROBE_COUPLER:
      return sqz::ProbeSide::Coupler;
    case SQZ_PROBE_HR:
      return sqz::ProbeSide::HighReflector;
  }
  sqz::fail(sqz::ErrorCode::InvalidArgument, "unknown probe side");
}

sqz::DataKind from_c(sqz_data_kind kind) {
  switch (kind) {
    case SQZ_DATA_GAIN:
      return sqz::DataKind::Gain;
    case SQZ_DATA_SQUEEZE:
      return sqz::DataKind::Squeeze;
    case SQZ_DATA_FP_RESPONSE:
      return sqz::DataKind::FpResponse;
  }
  sqz::fail(sqz::ErrorCode::InvalidArgument, "unknown data kind");
}

sqz::LsqOptions from_c(const sqz_fit_options* opts) {
  sqz::LsqOptions o;
  if (opts) {
    o.grad_tol = opts->grad_tol;
    o.step_tol = opts->step_tol;
    o.max_iter = opts->max_iter;
    o.starts = opts->starts;
    o.seed = opts->seed;
  }
  return o;
}

sqz::TraceConfig from_c(const sqz_trace_config& c) {
  sqz::TraceConfig t;
  t.state = from_c(c.state);
  t.duration_s = c.duration_s;
  t.sample_rate = c.sample_rate;
  switch (c.phase_mode) {
    case SQZ_PHASE_SCANNED:
      t.phase_mode = sqz::PhaseMode::Scanned;
      break;
    case SQZ_PHASE_DRIFT:
      t.phase_mode = sqz::PhaseMode::Drift;
      break;
    case SQZ_PHASE_FIXED:
      t.phase_mode = sqz::PhaseMode::Fixed;
      break;
    default:
      sqz::fail(sqz::ErrorCode::InvalidArgument, "unknown phase mode");
  }
  t.scan_period_s = c.scan_period_s;
  t.waveform = c.waveform == SQZ_WAVE_SAWTOOTH ? sqz::ScanWaveform::Sawtooth : sqz::ScanWaveform::Triangle;
  t.drift_diffusion = c.drift_diffusion;
  t.theta = c.theta;
  t.phase_jitter_rad = c.phase_jitter_rad;
  t.rbw_hz = c.rbw_hz;
  t.vbw_hz = c.vbw_hz;
  t.dark_clearance_db = c.dark_clearance_db;
  t.shot_averages = c.shot_averages;
  t.seed = c.seed;
  return t;
}

sqz_trace_config to_c(const sqz::TraceConfig& t) {
  sqz_trace_config c{};
  c.state = to_c(t.state);
  c.duration_s = t.duration_s;
  c.sample_rate = t.sample_rate;
  c.phase_mode = t.phase_mode == sqz::PhaseMode::Scanned ? SQZ_PHASE_SCANNED
                 : t.phase_mode == sqz::PhaseMode::Drift ? SQZ_PHASE_DRIFT
                                                         : SQZ_PHASE_FIXED;
  c.scan_period_s = t.scan_period_s;
  c.waveform = t.waveform == sqz::ScanWaveform::Sawtooth ? SQZ_WAVE_SAWTOOTH : SQZ_WAVE_TRIANGLE;
  c.drift_diffusion = t.drift_diffusion;
  c.theta = t.theta;
  c.phase_jitter_rad = t.phase_jitter_rad;
  c.rbw_hz = t.rbw_hz;
  c.vbw_hz = t.vbw_hz;
  c.dark_clearance_db = t.dark_clearance_db;
  c.shot_averages = t.shot_averages;
  c.seed = t.seed;
  return c;
}

sqz::DesignSpace from_c(const sqz_design_space& c) {
  sqz::DesignSpace s;
  s.base = from_c(c.base);
  s.chain = from_c(c.chain);
  s.pump_available_w = c.pump_available_w;
  s.e_nl = c.e_nl;
  s.r_out_lo = c.r_out_lo;
  s.r_out_hi = c.r_out_hi;
  s.r_out_step = c.r_out_step;
  s.clip_ratio = c.clip_ratio;
  return s;
}

sqz_design_space to_c(const sqz::DesignSpace& s) {
  return {to_c(s.base), to_c(s.chain), s.pump_available_w, s.e_nl, s.r_out_lo, s.r_out_hi, s.r_out_step, s.clip_ratio};
}

sqz_prediction to_c(const sqz::Prediction& p) {
  return {p.r_out, p.eta_esc, p.p_th_w, p.pump_ratio, p.clipped ? 1 : 0,
          p.sqz_db, p.antisqz_db, p.produced_sqz_db, p.produced_antisqz_db};
}

char* dup_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* sqz_version(void) { return "1.0.0"; }

const char* sqz_status_name(sqz_status status) {
  switch (status) {
    case SQZ_OK:
      return "ok";
    case SQZ_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case SQZ_ERR_DOMAIN:
      return "domain error";
    case SQZ_ERR_ABOVE_THRESHOLD:
      return "above threshold";
    case SQZ_ERR_PARSE:
      return "parse error";
    case SQZ_ERR_IO:
      return "i/o error";
    case SQZ_ERR_NOT_CONVERGED:
      return "not converged";
    case SQZ_ERR_INFEASIBLE:
      return "infeasible";
    case SQZ_ERR_SCHEMA:
      return "schema mismatch";
    case SQZ_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* sqz_last_error(void) { return g_last_error.c_str(); }

void sqz_string_free(char* s) { std::free(s); }

// cavity

void sqz_cavity_spec_default(sqz_cavity_spec* spec) {
  if (spec) *spec = to_c(sqz::CavitySpec{});
}

sqz_status sqz_round_trip_time(const sqz_cavity_spec* spec, double* tau_s) {
  return guarded([&] {
    non_null(spec, tau_s);
    *tau_s = sqz::round_trip_time(from_c(*spec));
  });
}

sqz_status sqz_decay_rates(const sqz_cavity_spec* spec, sqz_cavity_rates* rates) {
  return guarded([&] {
    non_null(spec, rates);
    *rates = to_c(sqz::decay_rates(from_c(*spec)));
  });
}

sqz_status sqz_airy_response(const sqz_cavity_spec* spec, sqz_probe_side side, int on_resonance,
                             double* transmission, double* reflection) {
  return guarded([&] {
    non_null(spec, transmission, reflection);
    const auto r = sqz::airy_response(from_c(*spec), from_c(side), on_resonance != 0);
    *transmission = r.transmission;
    *reflection = r.reflection;
  });
}

sqz_status sqz_length_for_escape(const sqz_cavity_spec* spec, double target_eta_esc, double* length_mm) {
  return guarded([&] {
    non_null(spec, length_mm);
    *length_mm = sqz::length_for_escape_efficiency(from_c(*spec), target_eta_esc);
  });
}

// opo

sqz_status sqz_parametric_gain(double pump_ratio, double* g_plus, double* g_minus) {
  return guarded([&] {
    non_null(g_plus, g_minus);
    const auto g = sqz::parametric_gain(pump_ratio);
    *g_plus = g.g_plus;
    *g_minus = g.g_minus;
  });
}

sqz_status sqz_variances(const sqz_squeezer_state* state, sqz_quadrature_pair* pair) {
  return guarded([&] {
    non_null(state, pair);
    *pair = to_c(sqz::variances(from_c(*state)));
  });
}

sqz_status sqz_infer_from_pair(double sqz_db, double antisqz_db, double* eta_total, double* pump_ratio) {
  return guarded([&] {
    non_null(eta_total, pump_ratio);
    const auto inv = sqz::infer_from_pair(sqz_db, antisqz_db);
    *eta_total = inv.eta_total;
    *pump_ratio = inv.pump_ratio;
  });
}

sqz_status sqz_squeezing_spectrum(const sqz_squeezer_state* state, const sqz_cavity_rates* rates,
                                  double sideband_hz, sqz_quadrature_pair* pair) {
  return guarded([&] {
    non_null(state, rates, pair);
    *pair = to_c(sqz::squeezing_spectrum(from_c(*state), from_c(*rates), sideband_hz));
  });
}

sqz_status sqz_db_from_linear(double v, double* db) {
  return guarded([&] {
    non_null(db);
    *db = sqz::db_from_linear(v);
  });
}

double sqz_linear_from_db(double db) { return sqz::linear_from_db(db); }

// budget

sqz_status sqz_eta_det(const sqz_detection_chain* chain, double* eta_det) {
  return guarded([&] {
    non_null(chain, eta_det);
    *eta_det = sqz::eta_det(from_c(*chain));
  });
}

sqz_status sqz_eta_total(const sqz_detection_chain* chain, const sqz_cavity_rates* rates, double* eta_total) {
  return guarded([&] {
    non_null(chain, rates, eta_total);
    *eta_total = sqz::eta_total(from_c(*chain), from_c(*rates));
  });
}

sqz_status sqz_budget_report(const sqz_detection_chain* chain, const sqz_cavity_rates* rates,
                             const sqz_quadrature_pair* measured, sqz_budget** out) {
  return guarded([&] {
    non_null(chain, rates, out);
    std::optional<sqz::QuadraturePair> pair;
    if (measured) pair = sqz::QuadraturePair{measured->v_minus, measured->v_plus, measured->sqz_db, measured->antisqz_db};
    *out = new sqz_budget{sqz::budget_report(from_c(*chain), from_c(*rates), pair)};
  });
}

size_t sqz_budget_stage_count(const sqz_budget* b) { return b ? b->report.stages.size() : 0; }

sqz_status sqz_budget_stage_at(const sqz_budget* b, size_t index, sqz_budget_stage* stage) {
  return guarded([&] {
    non_null(b, stage);
    sqz::require(index < b->report.stages.size(), "budget stage index out of range");
    const auto& s = b->report.stages[index];
    *stage = {s.name.c_str(), s.transmission, s.cumulative};
  });
}

double sqz_budget_modeled_eta_total(const sqz_budget* b) { return b ? b->report.modeled_eta_total : 0.0; }

int sqz_budget_residual(const sqz_budget* b, double* inferred_eta_total, double* residual) {
  if (!b || !b->report.residual) return 0;
  if (inferred_eta_total) *inferred_eta_total = *b->report.inferred_eta_total;
  if (residual) *residual = *b->report.residual;
  return 1;
}

void sqz_budget_free(sqz_budget* b) { delete b; }

// data and fitting

sqz_status sqz_dataset_load_csv(const char* path, sqz_data_kind kind, sqz_dataset** out) {
  return guarded([&] {
    non_null(path, out);
    *out = new sqz_dataset{sqz::load_csv(path, from_c(kind))};
  });
}

sqz_status sqz_dataset_parse_csv(const char* text, sqz_data_kind kind, sqz_dataset** out) {
  return guarded([&] {
    non_null(text, out);
    *out = new sqz_dataset{sqz::parse_csv(text, from_c(kind))};
  });
}

sqz_status sqz_dataset_to_csv(const sqz_dataset* data, char** text) {
  return guarded([&] {
    non_null(data, text);
    *text = dup_string(sqz::to_csv(data->data));
  });
}

sqz_data_kind sqz_dataset_kind(const sqz_dataset* data) {
  if (!data) return SQZ_DATA_GAIN;
  switch (data->data.kind) {
    case sqz::DataKind::Gain:
      return SQZ_DATA_GAIN;
    case sqz::DataKind::Squeeze:
      return SQZ_DATA_SQUEEZE;
    case sqz::DataKind::FpResponse:
      return SQZ_DATA_FP_RESPONSE;
  }
  return SQZ_DATA_GAIN;
}

size_t sqz_dataset_rows(const sqz_dataset* data) { return data ? data->data.rows() : 0; }

void sqz_dataset_free(sqz_dataset* data) { delete data; }

void sqz_fit_options_default(sqz_fit_options* opts) {
  if (!opts) return;
  const sqz::LsqOptions o;
  *opts = {o.grad_tol, o.step_tol, o.max_iter, o.starts, o.seed};
}

sqz_status sqz_fit_gain(const sqz_dataset* data, const sqz_fit_options* opts, sqz_fit_result** out) {
  return guarded([&] {
    non_null(data, out);
    *out = new sqz_fit_result{sqz::fit_threshold_from_gain(data->data, from_c(opts))};
  });
}

sqz_status sqz_fit_squeeze(const sqz_dataset* data, double eta_esc, double eta_det, int free_eta_det,
                           const sqz_fit_options* opts, sqz_fit_result** out) {
  return guarded([&] {
    non_null(data, out);
    const sqz::SqueezeFitSetup setup{eta_esc, eta_det, free_eta_det != 0};
    *out = new sqz_fit_result{sqz::fit_squeeze_sweep(data->data, setup, from_c(opts))};
  });
}

sqz_status sqz_characterize_cavity(const sqz_dataset* data, const sqz_cavity_knowns* known, sqz_probe_side side,
                                   const sqz_fit_options* opts, sqz_fit_result** out) {
  return guarded([&] {
    non_null(data, known, out);
    const sqz::CavityKnowns k{known->r_out, known->length_mm, known->ref_index, known->loss_passes};
    *out = new sqz_fit_result{sqz::characterize_cavity(data->data, k, from_c(side), from_c(opts))};
  });
}

int sqz_fit_converged(const sqz_fit_result* fit) { return fit && fit->fit.converged ? 1 : 0; }

size_t sqz_fit_param_count(const sqz_fit_result* fit) { return fit ? fit->fit.params.size() : 0; }

sqz_status sqz_fit_param_at(const sqz_fit_result* fit, size_t index, const char** name, double* value,
                            double* std_err) {
  return guarded([&] {
    non_null(fit);
    sqz::require(index < fit->fit.params.size(), "fit parameter index out of range");
    if (name) *name = fit->fit.names[index].c_str();
    if (value) *value = fit->fit.params[index];
    if (std_err) *std_err = fit->fit.stderr_[index];
  });
}

sqz_status sqz_fit_param(const sqz_fit_result* fit, const char* name, double* value, double* std_err) {
  return guarded([&] {
    non_null(fit, name);
    if (value) *value = fit->fit.param(name);
    if (std_err) *std_err = fit->fit.stderr_of(name);
  });
}

double sqz_fit_rss(const sqz_fit_result* fit) { return fit ? fit->fit.rss : 0.0; }

int sqz_fit_iterations(const sqz_fit_result* fit) { return fit ? fit->fit.iterations : 0; }

const char* sqz_fit_diagnostic(const sqz_fit_result* fit) { return fit ? fit->fit.diagnostic.c_str() : ""; }

size_t sqz_fit_residual_count(const sqz_fit_result* fit) { return fit ? fit->fit.residuals.size() : 0; }

const double* sqz_fit_residuals(const sqz_fit_result* fit) { return fit ? fit->fit.residuals.data() : nullptr; }

void sqz_fit_result_free(sqz_fit_result* fit) { delete fit; }

// simtrace

void sqz_trace_config_default(sqz_trace_config* cfg) {
  if (!cfg) return;
  sqz::TraceConfig t;
  t.state = {0.0, 1.0, 1.0};
  *cfg = to_c(t);
}

double sqz_variance_at_phase(const sqz_quadrature_pair* pair, double theta) {
  if (!pair) return 0.0;
  return sqz::variance_at_phase({pair->v_minus, pair->v_plus, pair->sqz_db, pair->antisqz_db}, theta);
}

sqz_status sqz_simulate(const sqz_trace_config* cfg, sqz_trace** shot, sqz_trace** squeeze) {
  return guarded([&] {
    non_null(cfg, shot, squeeze);
    auto traces = sqz::simulate(from_c(*cfg));
    auto* s = new sqz_trace{std::move(traces.shot)};
    try {
      *squeeze = new sqz_trace{std::move(traces.squeeze)};
    } catch (...) {
      delete s;
      throw;
    }
    *shot = s;
  });
}

sqz_status sqz_trace_from_powers(const double* raw_power, size_t n, double dark_power, sqz_trace** out) {
  return guarded([&] {
    non_null(out);
    sqz::require(n == 0 || raw_power != nullptr, "raw_power is NULL");
    sqz::require(dark_power >= 0, "dark power must be >= 0");
    sqz::Trace t;
    t.label = "raw";
    t.dark_power = dark_power;
    for (size_t i = 0; i < n; ++i) {
      sqz::TraceRow row;
      row.time_s = static_cast<double>(i);
      row.phase_rad = std::numeric_limits<double>::quiet_NaN();
      row.raw_power = raw_power[i];
      row.raw_db = raw_power[i] > 0 ? 10.0 * std::log10(raw_power[i] / (1.0 + dark_power))
                                    : std::numeric_limits<double>::quiet_NaN();
      row.corrected_valid = false;
      row.corrected_db = std::numeric_limits<double>::quiet_NaN();
      t.rows.push_back(row);
    }
    *out = new sqz_trace{std::move(t)};
  });
}

sqz_status sqz_dark_correct(const sqz_trace* raw, const sqz_trace* shot, sqz_trace** out) {
  return guarded([&] {
    non_null(raw, shot, out);
    *out = new sqz_trace{sqz::dark_correct(raw->trace, shot->trace)};
  });
}

size_t sqz_trace_size(const sqz_trace* trace) { return trace ? trace->trace.rows.size() : 0; }

sqz_status sqz_trace_row_at(const sqz_trace* trace, size_t index, sqz_trace_row* row) {
  return guarded([&] {
    non_null(trace, row);
    sqz::require(index < trace->trace.rows.size(), "trace row index out of range");
    const auto& r = trace->trace.rows[index];
    *row = {r.time_s, r.phase_rad, r.raw_power, r.raw_db, r.corrected_db, r.corrected_valid ? 1 : 0};
  });
}

double sqz_trace_dark_power(const sqz_trace* trace) { return trace ? trace->trace.dark_power : 0.0; }

sqz_status sqz_trace_to_csv(const sqz_trace* trace, char** text) {
  return guarded([&] {
    non_null(trace, text);
    *text = dup_string(sqz::trace_csv(trace->trace));
  });
}

sqz_status sqz_trace_write_csv(const sqz_trace* trace, const char* path) {
  return guarded([&] {
    non_null(trace, path);
    sqz::write_trace_csv(trace->trace, path);
  });
}

sqz_status sqz_simulate_sweep(const sqz_trace_config* base, const double* pump_mw, size_t n, double p_th_mw,
                              sqz_dataset** out) {
  return guarded([&] {
    non_null(base, pump_mw, out);
    *out = new sqz_dataset{sqz::simulate_sweep(from_c(*base), std::span<const double>(pump_mw, n), p_th_mw)};
  });
}

void sqz_trace_free(sqz_trace* trace) { delete trace; }

// design

sqz_status sqz_threshold_power(const sqz_cavity_spec* spec, double e_nl, double* p_th_w) {
  return guarded([&] {
    non_null(spec, p_th_w);
    *p_th_w = sqz::threshold_power(from_c(*spec), e_nl);
  });
}

sqz_status sqz_calibrate_enl(const sqz_cavity_spec* spec, double p_th_w, double* e_nl) {
  return guarded([&] {
    non_null(spec, e_nl);
    *e_nl = sqz::calibrate_enl(from_c(*spec), p_th_w);
  });
}

sqz_status sqz_predict(const sqz_design_space* space, double r_out, int strict, sqz_prediction* out) {
  return guarded([&] {
    non_null(space, out);
    *out = to_c(sqz::predict_detected_sqz(from_c(*space), r_out, strict != 0));
  });
}

sqz_status sqz_optimize_coupler(const sqz_design_space* space, int strict, sqz_sweep** out) {
  return guarded([&] {
    non_null(space, out);
    *out = new sqz_sweep{sqz::optimize_coupler(from_c(*space), strict != 0)};
  });
}

size_t sqz_sweep_size(const sqz_sweep* sweep) { return sweep ? sweep->sweep.rows.size() : 0; }

sqz_status sqz_sweep_row_at(const sqz_sweep* sweep, size_t index, sqz_prediction* row) {
  return guarded([&] {
    non_null(sweep, row);
    sqz::require(index < sweep->sweep.rows.size(), "sweep row index out of range");
    *row = to_c(sweep->sweep.rows[index]);
  });
}

double sqz_sweep_best_r_out(const sqz_sweep* sweep) { return sweep ? sweep->sweep.r_out_best : 0.0; }

size_t sqz_sweep_best_index(const sqz_sweep* sweep) { return sweep ? sweep->sweep.best_index : 0; }

sqz_status sqz_sweep_to_csv(const sqz_sweep* sweep, char** text) {
  return guarded([&] {
    non_null(sweep, text);
    *text = dup_string(sqz::sweep_csv(sweep->sweep));
  });
}

void sqz_sweep_free(sqz_sweep* sweep) { delete sweep; }

// config

sqz_status sqz_config_load(const char* path, sqz_config** out) {
  return guarded([&] {
    non_null(path, out);
    *out = new sqz_config{sqz::load_config(path)};
  });
}

sqz_status sqz_config_parse(const char* json_text, sqz_config** out) {
  return guarded([&] {
    non_null(json_text, out);
    *out = new sqz_config{sqz::parse_config(json_text)};
  });
}

void sqz_config_cavity(const sqz_config* cfg, sqz_cavity_spec* spec) {
  if (cfg && spec) *spec = to_c(cfg->config.cavity);
}

void sqz_config_detection(const sqz_config* cfg, sqz_detection_chain* chain) {
  if (cfg && chain) *chain = to_c(cfg->config.detection);
}

int sqz_config_has_pump(const sqz_config* cfg) { return cfg && cfg->config.pump ? 1 : 0; }

sqz_status sqz_config_pump(const sqz_config* cfg, double* power_mw, double* p_th_mw, double* e_nl_per_w) {
  return guarded([&] {
    non_null(cfg);
    const auto& pump = cfg->config.require_pump();
    if (power_mw) *power_mw = pump.power_mw;
    if (p_th_mw) *p_th_mw = cfg->config.threshold_mw();
    if (e_nl_per_w) *e_nl_per_w = cfg->config.e_nl_per_w();
  });
}

sqz_status sqz_config_trace(const sqz_config* cfg, sqz_trace_config* trace) {
  return guarded([&] {
    non_null(cfg, trace);
    *trace = to_c(cfg->config.trace_config());
  });
}

sqz_status sqz_config_design(const sqz_config* cfg, sqz_design_space* space) {
  return guarded([&] {
    non_null(cfg, space);
    *space = to_c(cfg->config.design_space());
  });
}

void sqz_config_free(sqz_config* cfg) { delete cfg; }

}  // extern "C"
