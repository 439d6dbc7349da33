// sqzkit command-line front end. Talks to the library only through the C API.

#include <sqzkit/sqzkit.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using ordered_json = nlohmann::ordered_json;

enum Exit { kOk = 0, kInput = 1, kNotConverged = 2 };

struct CliError {
  int code;
  std::string message;
};

void check(sqz_status s) {
  if (s != SQZ_OK) throw CliError{kInput, std::string(sqz_status_name(s)) + ": " + sqz_last_error()};
}

[[noreturn]] void usage_error(const std::string& msg) { throw CliError{kInput, msg}; }

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using ConfigPtr = std::unique_ptr<sqz_config, Deleter<sqz_config, sqz_config_free>>;
using DatasetPtr = std::unique_ptr<sqz_dataset, Deleter<sqz_dataset, sqz_dataset_free>>;
using FitPtr = std::unique_ptr<sqz_fit_result, Deleter<sqz_fit_result, sqz_fit_result_free>>;
using TracePtr = std::unique_ptr<sqz_trace, Deleter<sqz_trace, sqz_trace_free>>;
using SweepPtr = std::unique_ptr<sqz_sweep, Deleter<sqz_sweep, sqz_sweep_free>>;
using BudgetPtr = std::unique_ptr<sqz_budget, Deleter<sqz_budget, sqz_budget_free>>;

std::string take_string(char* s) {
  std::string out = s ? s : "";
  sqz_string_free(s);
  return out;
}

std::string fixed(double v, int decimals) {
  if (std::isnan(v)) return "nan";
  if (std::fabs(v) < 0.5 * std::pow(10.0, -decimals)) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string general(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Flat key/value report. Humans get rounded values, --json and CSV get the
// same doubles at full precision.
class Report {
public:
  enum class Kind { Db, Eff, Num, Int, Text };

  void db(const std::string& key, double v, const std::string& label = "") { add(key, v, Kind::Db, "dB", label); }
  void eff(const std::string& key, double v, const std::string& label = "") { add(key, v, Kind::Eff, "", label); }
  void num(const std::string& key, double v, const std::string& unit = "", const std::string& label = "") {
    add(key, v, Kind::Num, unit, label);
  }
  void integer(const std::string& key, long long v) { add(key, static_cast<double>(v), Kind::Int, "", ""); }
  void text(const std::string& key, const std::string& v) { entries_.push_back({key, 0, Kind::Text, "", "", v, std::nullopt}); }
  void flag(const std::string& key, bool v) { text(key, v ? "yes" : "no"); }

  // Value with uncertainty (shares one human line).
  void num_pm(const std::string& key, double v, double err, const std::string& unit) {
    add(key, v, Kind::Num, unit, "");
    entries_.back().err = err;
  }
  void eff_pm(const std::string& key, double v, double err) {
    add(key, v, Kind::Eff, "", "");
    entries_.back().err = err;
  }

  void table(const std::string& key, ordered_json rows, std::string human) {
    tables_.push_back({key, std::move(rows), std::move(human)});
  }

  void print(std::ostream& os, bool as_json) const {
    if (as_json) {
      os << to_json().dump(2) << '\n';
      return;
    }
    std::size_t width = 0;
    for (const auto& e : entries_) width = std::max(width, display(e).size());
    for (const auto& e : entries_) {
      const std::string name = display(e);
      os << name << std::string(width - name.size() + 2, ' ') << value_text(e) << '\n';
    }
    for (const auto& t : tables_) os << '\n' << t.human;
  }

  ordered_json to_json() const {
    ordered_json j = ordered_json::object();
    for (const auto& e : entries_) {
      if (e.kind == Kind::Text) {
        j[e.key] = e.text;
      } else if (e.kind == Kind::Int) {
        j[e.key] = static_cast<long long>(e.value);
      } else {
        j[e.key] = e.value;
        if (e.err) j[e.key + "_stderr"] = *e.err;
      }
    }
    for (const auto& t : tables_) j[t.key] = t.rows;
    return j;
  }

  std::string csv() const {
    std::ostringstream os;
    os << "key,value\n";
    for (const auto& e : entries_) {
      if (e.kind == Kind::Text) {
        os << e.key << ',' << e.text << '\n';
        continue;
      }
      os << e.key << ',' << (e.kind == Kind::Int ? std::to_string(static_cast<long long>(e.value)) : full(e.value))
         << '\n';
      if (e.err) os << e.key << "_stderr," << full(*e.err) << '\n';
    }
    return os.str();
  }

private:
  struct Entry {
    std::string key;
    double value;
    Kind kind;
    std::string unit;
    std::string label;
    std::string text;
    std::optional<double> err;
  };
  struct Table {
    std::string key;
    ordered_json rows;
    std::string human;
  };

  void add(const std::string& key, double v, Kind kind, const std::string& unit, const std::string& label) {
    entries_.push_back({key, v, kind, unit, label, "", std::nullopt});
  }

  static std::string display(const Entry& e) { return e.label.empty() ? e.key : e.label; }

  static std::string format(double v, Kind kind) {
    switch (kind) {
      case Kind::Db: return fixed(v, 2);
      case Kind::Eff: return fixed(v, 3);
      case Kind::Int: return std::to_string(static_cast<long long>(v));
      default: return general(v);
    }
  }

  static std::string value_text(const Entry& e) {
    if (e.kind == Kind::Text) return e.text;
    std::string s = format(e.value, e.kind);
    if (e.err) s += " +/- " + format(*e.err, e.kind == Kind::Db ? Kind::Db : e.kind == Kind::Eff ? Kind::Eff : Kind::Num);
    if (!e.unit.empty()) s += " " + e.unit;
    return s;
  }

  std::vector<Entry> entries_;
  std::vector<Table> tables_;
};

struct Globals {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  bool strict = false;
  bool json = false;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) usage_error("cannot open output file '" + path + "'");
  out << text;
  if (!out) usage_error("failed writing output file '" + path + "'");
}

ConfigPtr open_config(const Globals& g, const char* command) {
  if (g.config_path.empty()) usage_error(std::string(command) + ": --config is required");
  sqz_config* cfg = nullptr;
  check(sqz_config_load(g.config_path.c_str(), &cfg));
  return ConfigPtr(cfg);
}

ConfigPtr maybe_config(const Globals& g) {
  if (g.config_path.empty()) return nullptr;
  sqz_config* cfg = nullptr;
  check(sqz_config_load(g.config_path.c_str(), &cfg));
  return ConfigPtr(cfg);
}

sqz_cavity_rates rates_of(const sqz_config* cfg) {
  sqz_cavity_spec spec;
  sqz_config_cavity(cfg, &spec);
  sqz_cavity_rates rates;
  check(sqz_decay_rates(&spec, &rates));
  return rates;
}

double eta_det_of(const sqz_config* cfg) {
  sqz_detection_chain chain;
  sqz_config_detection(cfg, &chain);
  double eta = 0;
  check(sqz_eta_det(&chain, &eta));
  return eta;
}

sqz_fit_options fit_options(const Globals& g) {
  sqz_fit_options opts;
  sqz_fit_options_default(&opts);
  if (g.seed) opts.seed = *g.seed;
  return opts;
}

DatasetPtr load_data(const std::string& path, sqz_data_kind kind) {
  sqz_dataset* data = nullptr;
  check(sqz_dataset_load_csv(path.c_str(), kind, &data));
  return DatasetPtr(data);
}

void add_pair(Report& r, const sqz_quadrature_pair& pair, const std::string& prefix = "") {
  r.db(prefix + "sqz_db", pair.sqz_db);
  r.db(prefix + "antisqz_db", pair.antisqz_db);
  r.num(prefix + "v_minus", pair.v_minus);
  r.num(prefix + "v_plus", pair.v_plus);
}

// Shared tail for every fit subcommand.
int finish_fit(const Globals& g, const sqz_fit_result* fit, Report& r) {
  for (std::size_t i = 0; i < sqz_fit_param_count(fit); ++i) {
    const char* name = nullptr;
    double value = 0, err = 0;
    check(sqz_fit_param_at(fit, i, &name, &value, &err));
    const std::string key = name;
    if (key.rfind("eta", 0) == 0 || key.rfind("r_", 0) == 0)
      r.eff_pm(key, value, err);
    else
      r.num_pm(key, value, err, key.size() > 3 && key.substr(key.size() - 3) == "_mw" ? "mW" : "");
  }
  r.num("rss", sqz_fit_rss(fit));
  r.integer("iterations", sqz_fit_iterations(fit));
  r.integer("points", static_cast<long long>(sqz_fit_residual_count(fit)));
  const bool ok = sqz_fit_converged(fit) != 0;
  r.flag("converged", ok);
  if (!ok) r.text("diagnostic", sqz_fit_diagnostic(fit));
  if (!g.out_path.empty()) write_file(g.out_path, r.csv());
  r.print(std::cout, g.json);
  return ok ? kOk : kNotConverged;
}

int emit(const Globals& g, const Report& r) {
  if (!g.out_path.empty()) write_file(g.out_path, r.csv());
  r.print(std::cout, g.json);
  return kOk;
}

// ------------------------------------------------------------ subcommands

int cmd_cavity(const Globals& g) {
  auto cfg = open_config(g, "cavity");
  sqz_cavity_spec spec;
  sqz_config_cavity(cfg.get(), &spec);
  const auto rates = rates_of(cfg.get());
  Report r;
  r.num("tau_s", rates.tau_s, "s");
  r.num("gamma_coup", rates.gamma_coup, "1/s");
  r.num("gamma_hr", rates.gamma_hr, "1/s");
  r.num("gamma_loss", rates.gamma_loss, "1/s");
  r.num("gamma_tot", rates.gamma_tot, "1/s");
  r.eff("eta_esc", rates.eta_esc);
  r.num("fwhm_hz", rates.fwhm_hz, "Hz");
  r.num("fsr_hz", rates.fsr_hz, "Hz");
  const char* names[2] = {"on", "off"};
  for (int on = 1; on >= 0; --on) {
    double t = 0, refl = 0;
    check(sqz_airy_response(&spec, SQZ_PROBE_COUPLER, on, &t, &refl));
    r.eff(std::string("trans_") + names[1 - on], t);
    r.eff(std::string("refl_") + names[1 - on], refl);
  }
  if (sqz_config_has_pump(cfg.get())) {
    double power = 0, p_th = 0, e_nl = 0;
    check(sqz_config_pump(cfg.get(), &power, &p_th, &e_nl));
    r.num("p_th_mw", p_th, "mW");
    r.num("e_nl_per_w", e_nl, "1/W");
  }
  return emit(g, r);
}

int cmd_budget(const Globals& g, std::optional<double> sqz_db, std::optional<double> antisqz_db) {
  auto cfg = open_config(g, "budget");
  if (sqz_db.has_value() != antisqz_db.has_value())
    usage_error("budget: give both --sqz-db and --antisqz-db, or neither");
  sqz_detection_chain chain;
  sqz_config_detection(cfg.get(), &chain);
  const auto rates = rates_of(cfg.get());
  std::optional<sqz_quadrature_pair> measured;
  if (sqz_db) {
    const double s = *sqz_db > 0 ? -*sqz_db : *sqz_db;
    measured = sqz_quadrature_pair{sqz_linear_from_db(s), sqz_linear_from_db(*antisqz_db), s, *antisqz_db};
  }
  sqz_budget* raw = nullptr;
  check(sqz_budget_report(&chain, &rates, measured ? &*measured : nullptr, &raw));
  BudgetPtr b(raw);

  Report r;
  ordered_json rows = ordered_json::array();
  std::ostringstream human, csv;
  human << "stage           transmission  cumulative\n";
  csv << "stage,transmission,cumulative\n";
  for (std::size_t i = 0; i < sqz_budget_stage_count(b.get()); ++i) {
    sqz_budget_stage st;
    check(sqz_budget_stage_at(b.get(), i, &st));
    rows.push_back({{"stage", st.name}, {"transmission", st.transmission}, {"cumulative", st.cumulative}});
    char line[128];
    std::snprintf(line, sizeof line, "%-15s %12s  %10s\n", st.name, fixed(st.transmission, 3).c_str(),
                  fixed(st.cumulative, 3).c_str());
    human << line;
    csv << st.name << ',' << full(st.transmission) << ',' << full(st.cumulative) << '\n';
  }
  double eta_det = 0;
  check(sqz_eta_det(&chain, &eta_det));
  r.eff("eta_esc", rates.eta_esc);
  r.eff("eta_det", eta_det);
  r.eff("eta_total", sqz_budget_modeled_eta_total(b.get()));
  double inferred = 0, residual = 0;
  if (sqz_budget_residual(b.get(), &inferred, &residual)) {
    r.eff("inferred_eta_total", inferred);
    r.eff("residual", residual);
  }
  r.table("stages", rows, human.str());
  if (!g.out_path.empty()) write_file(g.out_path, csv.str());
  r.print(std::cout, g.json);
  return kOk;
}

int cmd_predict(const Globals& g, std::optional<double> pump_mw) {
  auto cfg = open_config(g, "predict");
  if (!sqz_config_has_pump(cfg.get())) usage_error("predict: config has no 'pump' section");
  double power = 0, p_th = 0, e_nl = 0;
  check(sqz_config_pump(cfg.get(), &power, &p_th, &e_nl));
  if (pump_mw) power = *pump_mw;
  if (power < 0) usage_error("predict: --pump-mw must be >= 0");
  const auto rates = rates_of(cfg.get());
  const double eta_det = eta_det_of(cfg.get());
  const double ratio = power / p_th;

  sqz_squeezer_state detected{ratio, rates.eta_esc, eta_det};
  sqz_squeezer_state produced{ratio, rates.eta_esc, 1.0};
  sqz_quadrature_pair pd, pp;
  check(sqz_variances(&detected, &pd));
  check(sqz_variances(&produced, &pp));

  Report r;
  r.num("pump_mw", power, "mW");
  r.num("p_th_mw", p_th, "mW");
  r.eff("pump_ratio", ratio);
  r.eff("eta_esc", rates.eta_esc);
  r.eff("eta_det", eta_det);
  r.eff("eta_total", rates.eta_esc * eta_det);
  add_pair(r, pd);
  r.db("sqz_magnitude_db", std::fabs(pd.sqz_db), "dB of squeezing");
  r.db("produced_sqz_db", pp.sqz_db);
  r.db("produced_antisqz_db", pp.antisqz_db);
  return emit(g, r);
}

int cmd_infer(const Globals& g, double sqz_db, double antisqz_db, std::optional<double> eta_esc) {
  // The squeezing level is accepted either signed or as a positive magnitude.
  const double s = sqz_db > 0 ? -sqz_db : sqz_db;
  double eta = 0, ratio = 0;
  check(sqz_infer_from_pair(s, antisqz_db, &eta, &ratio));
  Report r;
  r.db("sqz_db", s);
  r.db("antisqz_db", antisqz_db);
  r.eff("eta_total", eta);
  r.eff("pump_ratio", ratio);
  r.eff("loss_total", 1.0 - eta);

  auto cfg = maybe_config(g);
  if (!eta_esc && cfg) eta_esc = rates_of(cfg.get()).eta_esc;
  if (eta_esc) {
    if (!(*eta_esc > 0 && *eta_esc <= 1)) usage_error("infer-pair: --eta-esc must lie in (0, 1]");
    r.eff("eta_esc", *eta_esc);
    r.eff("implied_eta_det", eta / *eta_esc);
    sqz_squeezer_state produced{ratio, *eta_esc, 1.0};
    sqz_quadrature_pair pp;
    check(sqz_variances(&produced, &pp));
    r.db("produced_sqz_db", pp.sqz_db);
    r.db("produced_antisqz_db", pp.antisqz_db);
  }
  if (cfg && sqz_config_has_pump(cfg.get())) {
    double power = 0, p_th = 0, e_nl = 0;
    check(sqz_config_pump(cfg.get(), &power, &p_th, &e_nl));
    if (ratio > 0) r.num("implied_p_th_mw", power / ratio, "mW");
  }
  return emit(g, r);
}

int cmd_fit_gain(const Globals& g, const std::string& path) {
  auto data = load_data(path, SQZ_DATA_GAIN);
  const auto opts = fit_options(g);
  sqz_fit_result* raw = nullptr;
  check(sqz_fit_gain(data.get(), &opts, &raw));
  FitPtr fit(raw);
  Report r;
  r.text("data", path);
  return finish_fit(g, fit.get(), r);
}

int cmd_fit_sqz(const Globals& g, const std::string& path, bool free_eta_det, std::optional<double> eta_esc,
                std::optional<double> eta_det) {
  auto cfg = maybe_config(g);
  if (!eta_esc) {
    if (!cfg) usage_error("fit-sqz: need --config or --eta-esc");
    eta_esc = rates_of(cfg.get()).eta_esc;
  }
  if (!eta_det) {
    if (!cfg) usage_error("fit-sqz: need --config or --eta-det");
    eta_det = eta_det_of(cfg.get());
  }
  auto data = load_data(path, SQZ_DATA_SQUEEZE);
  const auto opts = fit_options(g);
  sqz_fit_result* raw = nullptr;
  check(sqz_fit_squeeze(data.get(), *eta_esc, *eta_det, free_eta_det ? 1 : 0, &opts, &raw));
  FitPtr fit(raw);
  Report r;
  r.text("data", path);
  r.eff("eta_esc", *eta_esc);
  if (!free_eta_det) r.eff("eta_det", *eta_det);
  return finish_fit(g, fit.get(), r);
}

int cmd_characterize(const Globals& g, const std::string& path, const std::string& probe) {
  auto cfg = open_config(g, "characterize");
  sqz_probe_side side;
  if (probe == "coupler")
    side = SQZ_PROBE_COUPLER;
  else if (probe == "hr")
    side = SQZ_PROBE_HR;
  else
    usage_error("characterize: --probe must be 'coupler' or 'hr'");
  sqz_cavity_spec spec;
  sqz_config_cavity(cfg.get(), &spec);
  const sqz_cavity_knowns known{spec.r_out, spec.length_mm, spec.ref_index, spec.loss_passes};
  auto data = load_data(path, SQZ_DATA_FP_RESPONSE);
  const auto opts = fit_options(g);
  sqz_fit_result* raw = nullptr;
  check(sqz_characterize_cavity(data.get(), &known, side, &opts, &raw));
  FitPtr fit(raw);
  Report r;
  r.text("data", path);
  r.text("probe", probe);
  return finish_fit(g, fit.get(), r);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      usage_error("--sweep-mw: '" + item + "' is not a number");
    }
  }
  if (out.empty()) usage_error("--sweep-mw: empty list");
  return out;
}

int cmd_simulate(const Globals& g, const std::string& sweep) {
  auto cfg = open_config(g, "simulate");
  sqz_trace_config tc;
  check(sqz_config_trace(cfg.get(), &tc));
  if (g.seed) tc.seed = *g.seed;

  if (!sweep.empty()) {
    const auto pumps = parse_list(sweep);
    double power = 0, p_th = 0, e_nl = 0;
    check(sqz_config_pump(cfg.get(), &power, &p_th, &e_nl));
    sqz_dataset* raw = nullptr;
    check(sqz_simulate_sweep(&tc, pumps.data(), pumps.size(), p_th, &raw));
    DatasetPtr data(raw);
    char* text = nullptr;
    check(sqz_dataset_to_csv(data.get(), &text));
    const std::string csv = take_string(text);
    if (g.out_path.empty() && !g.json) {
      std::cout << csv;
      return kOk;
    }
    if (!g.out_path.empty()) write_file(g.out_path, csv);
    Report r;
    r.integer("points", static_cast<long long>(sqz_dataset_rows(data.get())));
    r.num("p_th_mw", p_th, "mW");
    r.integer("seed", static_cast<long long>(tc.seed));
    if (!g.out_path.empty()) r.text("written", g.out_path);
    r.print(std::cout, g.json);
    return kOk;
  }

  sqz_trace *shot_raw = nullptr, *sq_raw = nullptr;
  check(sqz_simulate(&tc, &shot_raw, &sq_raw));
  TracePtr shot(shot_raw), sq(sq_raw);
  char* text = nullptr;
  check(sqz_trace_to_csv(sq.get(), &text));
  const std::string csv = take_string(text);
  if (g.out_path.empty() && !g.json) {
    std::cout << csv;
    return kOk;
  }
  if (!g.out_path.empty()) write_file(g.out_path, csv);

  double lo = INFINITY, hi = -INFINITY;
  long long invalid = 0;
  const std::size_t n = sqz_trace_size(sq.get());
  for (std::size_t i = 0; i < n; ++i) {
    sqz_trace_row row;
    check(sqz_trace_row_at(sq.get(), i, &row));
    if (!row.corrected_valid) {
      ++invalid;
      continue;
    }
    lo = std::min(lo, row.corrected_db);
    hi = std::max(hi, row.corrected_db);
  }
  Report r;
  r.integer("samples", static_cast<long long>(n));
  r.integer("invalid", invalid);
  r.num("dark_power", sqz_trace_dark_power(sq.get()));
  r.db("min_corrected_db", lo);
  r.db("max_corrected_db", hi);
  r.integer("seed", static_cast<long long>(tc.seed));
  if (!g.out_path.empty()) r.text("written", g.out_path);
  r.print(std::cout, g.json);
  return kOk;
}

int cmd_optimize(const Globals& g) {
  auto cfg = open_config(g, "optimize");
  sqz_design_space space;
  check(sqz_config_design(cfg.get(), &space));
  sqz_sweep* raw = nullptr;
  check(sqz_optimize_coupler(&space, g.strict ? 1 : 0, &raw));
  SweepPtr sweep(raw);
  sqz_prediction best;
  check(sqz_sweep_row_at(sweep.get(), sqz_sweep_best_index(sweep.get()), &best));
  std::size_t clipped = 0;
  for (std::size_t i = 0; i < sqz_sweep_size(sweep.get()); ++i) {
    sqz_prediction row;
    check(sqz_sweep_row_at(sweep.get(), i, &row));
    clipped += row.clipped ? 1 : 0;
  }
  Report r;
  r.integer("candidates", static_cast<long long>(sqz_sweep_size(sweep.get())));
  r.integer("clipped", static_cast<long long>(clipped));
  r.eff("r_out_best", best.r_out);
  r.eff("eta_esc", best.eta_esc);
  r.num("p_th_mw", best.p_th_w * 1e3, "mW");
  r.eff("pump_ratio", best.pump_ratio);
  r.flag("best_clipped", best.clipped != 0);
  r.db("sqz_db", best.sqz_db);
  r.db("antisqz_db", best.antisqz_db);
  r.db("sqz_magnitude_db", std::fabs(best.sqz_db), "dB of squeezing");
  r.db("produced_sqz_db", best.produced_sqz_db);
  r.db("produced_antisqz_db", best.produced_antisqz_db);
  if (!g.out_path.empty()) {
    char* text = nullptr;
    check(sqz_sweep_to_csv(sweep.get(), &text));
    write_file(g.out_path, take_string(text));
  }
  r.print(std::cout, g.json);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sqzkit: below-threshold squeezed-light source modelling and estimation"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", sqz_version());

  Globals g;
  std::uint64_t seed = 0;
  app.add_option("--config", g.config_path, "JSON run configuration");
  app.add_option("--out", g.out_path, "write results as CSV to this path");
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed for simulation and fit multi-starts");
  app.add_flag("--strict", g.strict, "treat pump ratios at or above threshold as errors instead of clipping");
  app.add_flag("--json", g.json, "machine-readable report on stdout");

  auto* cavity = app.add_subcommand("cavity", "derived cavity rates and Airy response");

  std::optional<double> b_sqz, b_anti;
  auto* budget = app.add_subcommand("budget", "efficiency budget of the detection chain");
  budget->add_option("--sqz-db", b_sqz, "measured squeezing (dB)");
  budget->add_option("--antisqz-db", b_anti, "measured anti-squeezing (dB)");

  std::optional<double> pump_mw;
  auto* predict = app.add_subcommand("predict", "detected and produced noise levels at a pump power");
  predict->add_option("--pump-mw", pump_mw, "pump power (default: config pump.power_mw)");

  double i_sqz = 0, i_anti = 0;
  std::optional<double> i_esc;
  auto* infer = app.add_subcommand("infer-pair", "total efficiency and pump ratio from a measured pair");
  infer->add_option("--sqz-db", i_sqz, "squeezing level (signed or magnitude)")->required();
  infer->add_option("--antisqz-db", i_anti, "anti-squeezing level")->required();
  infer->add_option("--eta-esc", i_esc, "escape efficiency for the produced-state split");

  std::string data_path;
  auto* fit_gain = app.add_subcommand("fit-gain", "fit the threshold to parametric gain data");
  fit_gain->add_option("--data", data_path, "gain CSV")->required();

  bool free_eta_det = false;
  std::optional<double> s_esc, s_det;
  auto* fit_sqz = app.add_subcommand("fit-sqz", "fit the threshold to a squeezing sweep");
  fit_sqz->add_option("--data", data_path, "squeeze CSV")->required();
  fit_sqz->add_flag("--free-eta-det", free_eta_det, "also fit the detection efficiency");
  fit_sqz->add_option("--eta-esc", s_esc, "escape efficiency (default: from config)");
  fit_sqz->add_option("--eta-det", s_det, "detection efficiency (default: from config)");

  std::string probe = "coupler";
  auto* characterize = app.add_subcommand("characterize", "back-mirror reflectivity and loss from Airy data");
  characterize->add_option("--data", data_path, "fp_response CSV")->required();
  characterize->add_option("--probe", probe, "input side: coupler or hr");

  std::string sweep;
  auto* simulate = app.add_subcommand("simulate", "synthetic homodyne traces");
  simulate->add_option("--sweep-mw", sweep, "comma-separated pump powers; emits a squeeze CSV");

  auto* optimize = app.add_subcommand("optimize", "output-coupler reflectivity sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }
  if (seed_opt->count()) g.seed = seed;

  try {
    if (cavity->parsed()) return cmd_cavity(g);
    if (budget->parsed()) return cmd_budget(g, b_sqz, b_anti);
    if (predict->parsed()) return cmd_predict(g, pump_mw);
    if (infer->parsed()) return cmd_infer(g, i_sqz, i_anti, i_esc);
    if (fit_gain->parsed()) return cmd_fit_gain(g, data_path);
    if (fit_sqz->parsed()) return cmd_fit_sqz(g, data_path, free_eta_det, s_esc, s_det);
    if (characterize->parsed()) return cmd_characterize(g, data_path, probe);
    if (simulate->parsed()) return cmd_simulate(g, sweep);
    if (optimize->parsed()) return cmd_optimize(g);
  } catch (const CliError& e) {
    std::cerr << "sqzkit: " << e.message << '\n';
    return e.code;
  }
  return kInput;
}
