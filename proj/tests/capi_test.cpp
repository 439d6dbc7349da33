#include <doctest.h>
#include <sqzkit/sqzkit.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace {

std::string data_path(const char* name) { return std::string(SQZ_DATA_DIR) + "/" + name; }

std::string take(char* s) {
  std::string out = s;
  sqz_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(sqz_version()) == "1.0.0");
  CHECK(std::string(sqz_status_name(SQZ_OK)) == "ok");
  CHECK(std::string(sqz_status_name(SQZ_ERR_ABOVE_THRESHOLD)) != "");
}

TEST_CASE("errors set a thread-local message") {
  double g1 = 0, g2 = 0;
  CHECK(sqz_parametric_gain(1.2, &g1, &g2) == SQZ_ERR_ABOVE_THRESHOLD);
  CHECK(std::string(sqz_last_error()).find("threshold") != std::string::npos);
  CHECK(sqz_parametric_gain(-0.5, &g1, &g2) == SQZ_ERR_DOMAIN);
  CHECK(sqz_parametric_gain(0.25, nullptr, &g2) == SQZ_ERR_INVALID_ARGUMENT);
  double eta = 0, ratio = 0;
  CHECK(sqz_infer_from_pair(-3.0, 1.0, &eta, &ratio) == SQZ_ERR_DOMAIN);
  CHECK(std::string(sqz_last_error()).find("B > A") != std::string::npos);
}

TEST_CASE("cavity and opo through the C interface") {
  sqz_cavity_spec spec;
  sqz_cavity_spec_default(&spec);
  CHECK(spec.length_mm == 8.0);
  sqz_cavity_rates rates;
  REQUIRE(sqz_decay_rates(&spec, &rates) == SQZ_OK);
  CHECK(rates.eta_esc == doctest::Approx(0.8103).epsilon(1e-4));
  double t = 0, r = 0;
  REQUIRE(sqz_airy_response(&spec, SQZ_PROBE_COUPLER, 1, &t, &r) == SQZ_OK);
  CHECK(t == doctest::Approx(0.10313).epsilon(1e-4));
  double len = 0;
  REQUIRE(sqz_length_for_escape(&spec, 0.81, &len) == SQZ_OK);
  CHECK(len == doctest::Approx(8.0).epsilon(0.01));

  sqz_squeezer_state st{0.18, 0.81, 0.72};
  sqz_quadrature_pair pair;
  REQUIRE(sqz_variances(&st, &pair) == SQZ_OK);
  CHECK(pair.sqz_db == doctest::Approx(-2.9).epsilon(0.03));
  double eta = 0, ratio = 0;
  REQUIRE(sqz_infer_from_pair(pair.sqz_db, pair.antisqz_db, &eta, &ratio) == SQZ_OK);
  CHECK(eta == doctest::Approx(0.81 * 0.72).epsilon(1e-9));
  sqz_quadrature_pair far;
  REQUIRE(sqz_squeezing_spectrum(&st, &rates, 1e12, &far) == SQZ_OK);
  CHECK(std::fabs(far.v_minus - 1) < 1e-3);
  double db = 0;
  CHECK(sqz_db_from_linear(0.0, &db) == SQZ_ERR_DOMAIN);
  CHECK(sqz_linear_from_db(10.0) == doctest::Approx(10.0));
}

TEST_CASE("budget handle") {
  sqz_detection_chain chain{0.95, 0.92, 0.88};
  sqz_cavity_spec spec;
  sqz_cavity_spec_default(&spec);
  sqz_cavity_rates rates;
  sqz_decay_rates(&spec, &rates);
  sqz_quadrature_pair measured{sqz_linear_from_db(-2.9), sqz_linear_from_db(6.0), -2.9, 6.0};
  sqz_budget* b = nullptr;
  REQUIRE(sqz_budget_report(&chain, &rates, &measured, &b) == SQZ_OK);
  CHECK(sqz_budget_stage_count(b) == 4);
  sqz_budget_stage st;
  REQUIRE(sqz_budget_stage_at(b, 3, &st) == SQZ_OK);
  CHECK(std::string(st.name) == "photodiode");
  CHECK(sqz_budget_stage_at(b, 4, &st) == SQZ_ERR_INVALID_ARGUMENT);
  double inferred = 0, residual = 0;
  CHECK(sqz_budget_residual(b, &inferred, &residual) == 1);
  CHECK(residual == doctest::Approx(0.983).epsilon(0.002));
  sqz_budget_free(b);
  sqz_budget_free(nullptr);
}

TEST_CASE("fits through the C interface") {
  sqz_dataset* gain = nullptr;
  REQUIRE(sqz_dataset_load_csv(data_path("gain.csv").c_str(), SQZ_DATA_GAIN, &gain) == SQZ_OK);
  CHECK(sqz_dataset_rows(gain) == 12);
  CHECK(sqz_dataset_kind(gain) == SQZ_DATA_GAIN);
  sqz_fit_result* fit = nullptr;
  REQUIRE(sqz_fit_gain(gain, nullptr, &fit) == SQZ_OK);
  CHECK(sqz_fit_converged(fit));
  double p_th = 0, err = 0;
  REQUIRE(sqz_fit_param(fit, "p_th_mw", &p_th, &err) == SQZ_OK);
  CHECK(std::fabs(p_th - 135) < 3 * err);
  CHECK(sqz_fit_param(fit, "nope", &p_th, &err) == SQZ_ERR_INVALID_ARGUMENT);
  CHECK(sqz_fit_residual_count(fit) == 24);
  CHECK(sqz_fit_residuals(fit) != nullptr);
  sqz_fit_result_free(fit);

  char* text = nullptr;
  REQUIRE(sqz_dataset_to_csv(gain, &text) == SQZ_OK);
  CHECK(take(text).rfind("pump_mw,g_plus,g_minus", 0) == 0);
  sqz_dataset_free(gain);

  sqz_dataset* bad = nullptr;
  CHECK(sqz_dataset_parse_csv("pump_mw,g_plus,g_minus\n1,x,1\n", SQZ_DATA_GAIN, &bad) == SQZ_ERR_PARSE);
  CHECK(bad == nullptr);
  CHECK(std::string(sqz_last_error()).find(":2:") != std::string::npos);

  sqz_dataset* fp = nullptr;
  REQUIRE(sqz_dataset_load_csv(data_path("fp_response.csv").c_str(), SQZ_DATA_FP_RESPONSE, &fp) == SQZ_OK);
  const sqz_cavity_knowns known{0.77, 8.0, 2.138, 2};
  REQUIRE(sqz_characterize_cavity(fp, &known, SQZ_PROBE_COUPLER, nullptr, &fit) == SQZ_OK);
  double r_hr = 0;
  REQUIRE(sqz_fit_param(fit, "r_hr", &r_hr, &err) == SQZ_OK);
  CHECK(r_hr == doctest::Approx(0.99).epsilon(0.002));
  sqz_fit_result_free(fit);
  sqz_dataset_free(fp);

  sqz_dataset* sq = nullptr;
  REQUIRE(sqz_dataset_parse_csv("pump_mw,rel_noise_db_min,rel_noise_db_max\n23,-2.9,6\n23,-2.9,6\n23,-2.9,6\n",
                                SQZ_DATA_SQUEEZE, &sq) == SQZ_OK);
  REQUIRE(sqz_fit_squeeze(sq, 0.81, 0.7, 1, nullptr, &fit) == SQZ_OK);
  CHECK(sqz_fit_param_count(fit) == 2);
  const char* name = nullptr;
  double v = 0;
  REQUIRE(sqz_fit_param_at(fit, 1, &name, &v, &err) == SQZ_OK);
  CHECK(std::string(name) == "eta_det");
  sqz_fit_result_free(fit);
  CHECK(sqz_fit_gain(sq, nullptr, &fit) == SQZ_ERR_INVALID_ARGUMENT);
  sqz_dataset_free(sq);
}

TEST_CASE("trace handles") {
  sqz_trace_config cfg;
  sqz_trace_config_default(&cfg);
  cfg.state = {0.18, 0.81, 0.72};
  sqz_trace *shot = nullptr, *sq = nullptr;
  REQUIRE(sqz_simulate(&cfg, &shot, &sq) == SQZ_OK);
  CHECK(sqz_trace_size(sq) == 1000);
  sqz_trace_row row;
  REQUIRE(sqz_trace_row_at(sq, 0, &row) == SQZ_OK);
  CHECK(row.corrected_valid == 1);
  CHECK(sqz_trace_row_at(sq, 1000, &row) == SQZ_ERR_INVALID_ARGUMENT);
  CHECK(sqz_trace_dark_power(sq) == doctest::Approx(0.0631).epsilon(1e-3));

  const double powers[] = {0.576, 0.01};
  const double shots[] = {1.0631, 1.0631};
  sqz_trace *raw = nullptr, *ref = nullptr, *corr = nullptr;
  REQUIRE(sqz_trace_from_powers(powers, 2, 0.0631, &raw) == SQZ_OK);
  REQUIRE(sqz_trace_from_powers(shots, 2, 0.0631, &ref) == SQZ_OK);
  REQUIRE(sqz_dark_correct(raw, ref, &corr) == SQZ_OK);
  REQUIRE(sqz_trace_row_at(corr, 1, &row) == SQZ_OK);
  CHECK(row.corrected_valid == 0);
  CHECK(std::isnan(row.corrected_db));

  char* text = nullptr;
  REQUIRE(sqz_trace_to_csv(sq, &text) == SQZ_OK);
  CHECK(take(text).find("time_s,phase_rad,raw_db,corrected_db") != std::string::npos);
  CHECK(sqz_trace_write_csv(sq, "/nonexistent/dir/t.csv") == SQZ_ERR_IO);

  const double pumps[] = {10, 20, 23};
  sqz_dataset* sweep = nullptr;
  REQUIRE(sqz_simulate_sweep(&cfg, pumps, 3, 135, &sweep) == SQZ_OK);
  CHECK(sqz_dataset_kind(sweep) == SQZ_DATA_SQUEEZE);
  sqz_dataset_free(sweep);

  cfg.vbw_hz = 1e6;
  sqz_trace *s2 = nullptr, *q2 = nullptr;
  CHECK(sqz_simulate(&cfg, &s2, &q2) == SQZ_ERR_INVALID_ARGUMENT);
  for (auto* t : {shot, sq, raw, ref, corr}) sqz_trace_free(t);
}

TEST_CASE("design and config handles") {
  sqz_config* cfg = nullptr;
  REQUIRE(sqz_config_load(data_path("reference.json").c_str(), &cfg) == SQZ_OK);
  CHECK(sqz_config_has_pump(cfg) == 1);
  double power = 0, p_th = 0, e_nl = 0;
  REQUIRE(sqz_config_pump(cfg, &power, &p_th, &e_nl) == SQZ_OK);
  CHECK(power == 23);
  CHECK(e_nl == doctest::Approx(0.1523).epsilon(1e-3));
  sqz_design_space space;
  REQUIRE(sqz_config_design(cfg, &space) == SQZ_OK);
  sqz_sweep* sweep = nullptr;
  REQUIRE(sqz_optimize_coupler(&space, 0, &sweep) == SQZ_OK);
  CHECK(sqz_sweep_size(sweep) == 49);
  CHECK(sqz_sweep_best_r_out(sweep) == doctest::Approx(0.82).epsilon(0.02));
  sqz_prediction best;
  REQUIRE(sqz_sweep_row_at(sweep, sqz_sweep_best_index(sweep), &best) == SQZ_OK);
  sqz_prediction again;
  REQUIRE(sqz_predict(&space, best.r_out, 0, &again) == SQZ_OK);
  CHECK(again.sqz_db == best.sqz_db);
  char* text = nullptr;
  REQUIRE(sqz_sweep_to_csv(sweep, &text) == SQZ_OK);
  CHECK(take(text).rfind("r_out,eta_esc,p_th_mw,pump_ratio,sqz_db,antisqz_db,clipped\n", 0) == 0);
  sqz_sweep_free(sweep);

  space.pump_available_w = 5.0;
  CHECK(sqz_optimize_coupler(&space, 1, &sweep) == SQZ_ERR_INFEASIBLE);
  CHECK(sqz_predict(&space, 0.77, 1, &again) == SQZ_ERR_ABOVE_THRESHOLD);
  sqz_trace_config tc;
  REQUIRE(sqz_config_trace(cfg, &tc) == SQZ_OK);
  CHECK(tc.state.pump_ratio == doctest::Approx(23.0 / 135));
  sqz_config_free(cfg);

  sqz_config* bad = nullptr;
  CHECK(sqz_config_parse("{\"schema\": 9}", &bad) == SQZ_ERR_SCHEMA);
  CHECK(sqz_config_parse("{", &bad) == SQZ_ERR_PARSE);
  CHECK(sqz_config_load("/nonexistent.json", &bad) == SQZ_ERR_IO);
  double th = 0;
  sqz_cavity_spec spec;
  sqz_cavity_spec_default(&spec);
  REQUIRE(sqz_threshold_power(&spec, e_nl, &th) == SQZ_OK);
  CHECK(th == doctest::Approx(0.135).epsilon(1e-12));
}
