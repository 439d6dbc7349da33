#include "config.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "error.hpp"

namespace sqz {

namespace {

using nlohmann::json;

// Walks one JSON object, remembering which keys were read so unknown keys
// can be reported with their full path.
class Section {
public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(ErrorCode::Parse, path_ + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  double number(const std::string& key) {
    const auto& v = at(key);
    if (!v.is_number()) fail(ErrorCode::Parse, where(key) + ": expected a number");
    return v.get<double>();
  }

  double number_or(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  std::optional<double> optional_number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return number(key);
  }

  std::int64_t integer_or(const std::string& key, std::int64_t fallback) {
    if (!has(key)) return fallback;
    const auto& v = at(key);
    if (!v.is_number_integer()) fail(ErrorCode::Parse, where(key) + ": expected an integer");
    return v.get<std::int64_t>();
  }

  std::string string_or(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const auto& v = at(key);
    if (!v.is_string()) fail(ErrorCode::Parse, where(key) + ": expected a string");
    return v.get<std::string>();
  }

  const json& at(const std::string& key) {
    if (!has(key)) fail(ErrorCode::Parse, where(key) + ": required key is missing");
    used_.insert(key);
    return j_.at(key);
  }

  std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void reject_unknown() const {
    for (const auto& [key, value] : j_.items())
      if (!used_.count(key)) fail(ErrorCode::Parse, where(key) + ": unknown key");
  }

private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

// Re-raise validation failures with the config path prefix they refer to.
template <class F>
void validated(const std::string& path, F&& check) {
  try {
    check();
  } catch (const Error& e) {
    const std::string what = e.what();
    fail(e.code(), what.rfind(path, 0) == 0 ? what : path + ": " + what);
  }
}

CavitySpec read_cavity(Section s) {
  CavitySpec c;
  c.length_mm = s.number("length_mm");
  c.ref_index = s.number_or("ref_index", c.ref_index);
  c.loss_db_per_cm = s.number("loss_db_per_cm");
  c.r_out = s.number("r_out");
  c.r_hr = s.number("r_hr");
  c.loss_passes = static_cast<int>(s.integer_or("loss_passes", c.loss_passes));
  s.reject_unknown();
  validated("cavity", [&] { c.validate(); });
  return c;
}

DetectionChain read_detection(Section s) {
  DetectionChain d;
  d.visibility = s.number("visibility");
  d.eta_prop = s.number("eta_prop");
  d.eta_pd = s.number("eta_pd");
  s.reject_unknown();
  validated("detection", [&] { d.validate(); });
  return d;
}

PumpConfig read_pump(Section s) {
  PumpConfig p;
  p.power_mw = s.number("power_mw");
  p.p_th_mw = s.optional_number("p_th_mw");
  p.e_nl_per_w = s.optional_number("e_nl_per_w");
  s.reject_unknown();
  require(p.power_mw >= 0, "pump.power_mw must be >= 0");
  require(p.p_th_mw.has_value() != p.e_nl_per_w.has_value(),
          "pump: exactly one of p_th_mw / e_nl_per_w must be given");
  require(!p.p_th_mw || *p.p_th_mw > 0, "pump.p_th_mw must be > 0");
  require(!p.e_nl_per_w || *p.e_nl_per_w > 0, "pump.e_nl_per_w must be > 0");
  return p;
}

TraceConfig read_sim(Section s) {
  TraceConfig t;
  t.duration_s = s.number_or("duration_s", t.duration_s);
  t.sample_rate = s.number_or("sample_rate", t.sample_rate);
  const auto mode = s.string_or("phase_mode", "scanned");
  if (mode == "scanned")
    t.phase_mode = PhaseMode::Scanned;
  else if (mode == "drift")
    t.phase_mode = PhaseMode::Drift;
  else if (mode == "fixed")
    t.phase_mode = PhaseMode::Fixed;
  else
    fail(ErrorCode::Parse, "sim.phase_mode: expected scanned, drift or fixed, got '" + mode + "'");
  t.scan_period_s = s.number_or("scan_period_s", t.scan_period_s);
  const auto wave = s.string_or("waveform", "triangle");
  if (wave == "triangle")
    t.waveform = ScanWaveform::Triangle;
  else if (wave == "sawtooth")
    t.waveform = ScanWaveform::Sawtooth;
  else
    fail(ErrorCode::Parse, "sim.waveform: expected triangle or sawtooth, got '" + wave + "'");
  t.drift_diffusion = s.number_or("drift_diffusion", t.drift_diffusion);
  t.theta = s.number_or("theta", t.theta);
  t.phase_jitter_rad = s.number_or("phase_jitter_rad", t.phase_jitter_rad);
  t.rbw_hz = s.number_or("rbw_hz", t.rbw_hz);
  t.vbw_hz = s.number_or("vbw_hz", t.vbw_hz);
  t.dark_clearance_db = s.number_or("dark_clearance_db", t.dark_clearance_db);
  t.shot_averages = static_cast<int>(s.integer_or("shot_averages", t.shot_averages));
  const auto seed = s.integer_or("seed", static_cast<std::int64_t>(t.seed));
  require(seed >= 0, "sim.seed must be >= 0");
  t.seed = static_cast<std::uint64_t>(seed);
  s.reject_unknown();
  return t;
}

DesignRange read_design(Section s) {
  DesignRange d;
  if (s.has("r_out_range")) {
    const auto& range = s.at("r_out_range");
    if (!range.is_array() || range.size() != 2 || !range[0].is_number() || !range[1].is_number())
      fail(ErrorCode::Parse, "design.r_out_range: expected [lo, hi]");
    d.lo = range[0].get<double>();
    d.hi = range[1].get<double>();
  }
  d.step = s.number_or("r_out_step", d.step);
  d.clip_ratio = s.number_or("clip_ratio", d.clip_ratio);
  s.reject_unknown();
  require(d.lo > 0 && d.lo < d.hi && d.hi < 1, "design.r_out_range must satisfy 0 < lo < hi < 1");
  require(d.step > 0, "design.r_out_step must be > 0");
  return d;
}

}  // namespace

void RunConfig::validate() const {
  cavity.validate();
  detection.validate();
}

const PumpConfig& RunConfig::require_pump() const {
  if (!pump) fail(ErrorCode::InvalidArgument, "config has no 'pump' section; it is required for this command");
  return *pump;
}

double RunConfig::threshold_mw() const {
  const auto& p = require_pump();
  if (p.p_th_mw) return *p.p_th_mw;
  return threshold_power(cavity, *p.e_nl_per_w) * 1e3;
}

double RunConfig::e_nl_per_w() const {
  const auto& p = require_pump();
  if (p.e_nl_per_w) return *p.e_nl_per_w;
  return calibrate_enl(cavity, *p.p_th_mw * 1e-3);
}

double RunConfig::eta_esc() const { return decay_rates(cavity).eta_esc; }

double RunConfig::eta_det() const { return sqz::eta_det(detection); }

SqueezerState RunConfig::squeezer_state(double pump_mw) const {
  SqueezerState s{pump_mw / threshold_mw(), eta_esc(), eta_det()};
  s.validate();
  return s;
}

TraceConfig RunConfig::trace_config() const {
  TraceConfig t = sim.value_or(TraceConfig{});
  t.state = squeezer_state(require_pump().power_mw);
  validated("sim", [&] { t.validate(); });
  return t;
}

DesignSpace RunConfig::design_space() const {
  const DesignRange range = design.value_or(DesignRange{});
  DesignSpace space;
  space.base = cavity;
  space.chain = detection;
  space.pump_available_w = require_pump().power_mw * 1e-3;
  space.e_nl = e_nl_per_w();
  space.r_out_lo = range.lo;
  space.r_out_hi = range.hi;
  space.r_out_step = range.step;
  space.clip_ratio = range.clip_ratio;
  validated("design", [&] { space.validate(); });
  return space;
}

RunConfig parse_config(std::string_view json_text, std::string_view source) {
  json j;
  try {
    j = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    fail(ErrorCode::Parse, std::string(source) + ": " + e.what());
  }
  Section root(j, "");
  const auto& schema = root.at("schema");
  if (!schema.is_number_integer() || schema.get<int>() != kConfigSchema)
    fail(ErrorCode::Schema, std::string(source) + ": unsupported config schema " + schema.dump() + " (expected " +
                                std::to_string(kConfigSchema) + ")");

  RunConfig cfg;
  cfg.cavity = read_cavity(Section(root.at("cavity"), "cavity"));
  cfg.detection = read_detection(Section(root.at("detection"), "detection"));
  if (root.has("pump")) cfg.pump = read_pump(Section(root.at("pump"), "pump"));
  if (root.has("sim")) cfg.sim = read_sim(Section(root.at("sim"), "sim"));
  if (root.has("design")) cfg.design = read_design(Section(root.at("design"), "design"));
  root.reject_unknown();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace sqz
