#include "simtrace.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "error.hpp"

namespace sqz {

namespace {

constexpr double kPi = std::numbers::pi;

std::mt19937_64 make_rng(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream};
  return std::mt19937_64(seq);
}

// Mean-one chi-square fluctuation with `dof` degrees of freedom.
double estimator_factor(std::mt19937_64& rng, double dof) {
  std::gamma_distribution<double> gamma(dof / 2.0, 2.0 / dof);
  return gamma(rng);
}

const char* to_string(PhaseMode m) {
  switch (m) {
    case PhaseMode::Scanned:
      return "scanned";
    case PhaseMode::Drift:
      return "drift";
    case PhaseMode::Fixed:
      return "fixed";
  }
  return "?";
}

double raw_db_of(double power, double dark) { return 10.0 * std::log10(power / (1.0 + dark)); }

}  // namespace

void TraceConfig::validate() const {
  state.validate();
  require(duration_s > 0, "sim.duration_s must be > 0");
  require(sample_rate > 0, "sim.sample_rate must be > 0");
  require(rbw_hz > 0, "sim.rbw_hz must be > 0");
  require(vbw_hz > 0 && vbw_hz <= rbw_hz, "sim.vbw_hz must lie in (0, rbw_hz]");
  require(dark_clearance_db > 0, "sim.dark_clearance_db must be > 0");
  require(shot_averages >= 1, "sim.shot_averages must be >= 1");
  require(phase_jitter_rad >= 0, "sim.phase_jitter_rad must be >= 0");
  if (phase_mode == PhaseMode::Scanned) require(scan_period_s > 0, "sim.scan_period_s must be > 0");
  require(std::llround(duration_s * sample_rate) >= 1, "sim.duration_s * sim.sample_rate must give at least one point");
}

double TraceConfig::effective_samples() const { return std::max(1.0, rbw_hz / vbw_hz); }

double TraceConfig::dark_power() const { return std::pow(10.0, -dark_clearance_db / 10.0); }

double variance_at_phase(const QuadraturePair& pair, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return pair.v_minus * c * c + pair.v_plus * s * s;
}

double variance_at_phase(const QuadraturePair& pair, double theta, double jitter_sigma) {
  if (jitter_sigma == 0) return variance_at_phase(pair, theta);
  // E[cos^2(theta + d)] = (1 + cos(2 theta) exp(-2 sigma^2)) / 2 for d ~ N(0, sigma^2).
  const double damp = std::exp(-2.0 * jitter_sigma * jitter_sigma);
  const double mean = 0.5 * (pair.v_minus + pair.v_plus);
  return mean + 0.5 * (pair.v_minus - pair.v_plus) * std::cos(2.0 * theta) * damp;
}

SimulatedTraces simulate(const TraceConfig& config) {
  config.validate();
  const auto pair = variances(config.state);
  const double dark = config.dark_power();
  const double dof = config.effective_samples();
  const auto n = static_cast<std::size_t>(std::llround(config.duration_s * config.sample_rate));
  const double dt = 1.0 / config.sample_rate;

  SimulatedTraces out;
  out.shot.label = "shot";
  out.squeeze.label = "squeeze";
  out.shot.config = out.squeeze.config = config;
  out.shot.dark_power = out.squeeze.dark_power = dark;

  auto shot_rng = make_rng(config.seed, 1);
  auto sqz_rng = make_rng(config.seed, 2);
  auto phase_rng = make_rng(config.seed, 3);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double diffusion =
      config.drift_diffusion > 0 ? config.drift_diffusion : kPi * kPi / config.duration_s;

  out.shot.rows.reserve(n);
  out.squeeze.rows.reserve(n);
  double theta = config.phase_mode == PhaseMode::Fixed ? config.theta : 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    switch (config.phase_mode) {
      case PhaseMode::Scanned: {
        const double frac = std::fmod(t / config.scan_period_s, 1.0);
        theta = config.waveform == ScanWaveform::Triangle ? kPi * (frac < 0.5 ? 2 * frac : 2 - 2 * frac) : kPi * frac;
        break;
      }
      case PhaseMode::Drift:
        if (i > 0) theta += std::sqrt(diffusion * dt) * normal(phase_rng);
        break;
      case PhaseMode::Fixed:
        break;
    }

    TraceRow shot;
    shot.time_s = t;
    shot.phase_rad = std::numeric_limits<double>::quiet_NaN();
    shot.raw_power = (1.0 + dark) * estimator_factor(shot_rng, dof * config.shot_averages);
    shot.raw_db = raw_db_of(shot.raw_power, dark);
    shot.corrected_valid = shot.raw_power > dark;
    shot.corrected_db = shot.corrected_valid ? 10.0 * std::log10(shot.raw_power - dark)
                                             : std::numeric_limits<double>::quiet_NaN();
    out.shot.rows.push_back(shot);

    TraceRow row;
    row.time_s = t;
    row.phase_rad = theta;
    const double v = variance_at_phase(pair, theta, config.phase_jitter_rad);
    row.raw_power = (v + dark) * estimator_factor(sqz_rng, dof);
    row.raw_db = raw_db_of(row.raw_power, dark);
    out.squeeze.rows.push_back(row);
  }
  out.squeeze = dark_correct(out.squeeze, out.shot);
  return out;
}

Trace dark_correct(const Trace& raw, const Trace& shot_raw) {
  require(raw.rows.size() == shot_raw.rows.size(), "dark_correct needs aligned traces of equal length");
  require(raw.dark_power == shot_raw.dark_power, "dark_correct needs traces with the same dark level");
  Trace out = raw;
  const double dark = raw.dark_power;
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    auto& row = out.rows[i];
    const double signal = row.raw_power - dark;
    const double reference = shot_raw.rows[i].raw_power - dark;
    row.corrected_valid = signal > 0 && reference > 0;
    row.corrected_db = row.corrected_valid ? 10.0 * std::log10(signal / reference)
                                           : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

std::string trace_csv(const Trace& trace) {
  const auto& c = trace.config;
  std::ostringstream os;
  os.precision(17);
  os << "# sqzkit trace\n"
     << "# schema_version: 1\n"
     << "# label: " << trace.label << '\n'
     << "# seed: " << c.seed << '\n'
     << "# pump_ratio: " << c.state.pump_ratio << '\n'
     << "# eta_esc: " << c.state.eta_esc << '\n'
     << "# eta_det: " << c.state.eta_det << '\n'
     << "# duration_s: " << c.duration_s << '\n'
     << "# sample_rate: " << c.sample_rate << '\n'
     << "# phase_mode: " << to_string(c.phase_mode) << '\n'
     << "# rbw_hz: " << c.rbw_hz << '\n'
     << "# vbw_hz: " << c.vbw_hz << '\n'
     << "# dark_clearance_db: " << c.dark_clearance_db << '\n'
     << "# shot_averages: " << c.shot_averages << '\n'
     << "time_s,phase_rad,raw_db,corrected_db\n";
  for (const auto& r : trace.rows) {
    os << r.time_s << ',';
    if (!std::isnan(r.phase_rad)) os << r.phase_rad;
    os << ',' << r.raw_db << ',';
    if (r.corrected_valid) os << r.corrected_db;
    os << '\n';
  }
  return os.str();
}

void write_trace_csv(const Trace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot write '" + path + "'");
  out << trace_csv(trace);
}

DataSet simulate_sweep(const TraceConfig& base, std::span<const double> pump_mw, double p_th_mw) {
  require(p_th_mw > 0, "sweep threshold must be > 0");
  require(!pump_mw.empty(), "sweep needs at least one pump power");
  DataSet data;
  data.kind = DataKind::Squeeze;
  auto seeds = make_rng(base.seed, 4);
  for (const double p : pump_mw) {
    TraceConfig cfg = base;
    cfg.state.pump_ratio = p / p_th_mw;
    cfg.phase_mode = PhaseMode::Fixed;

    double level[2] = {0, 0};
    const double phases[2] = {0.0, kPi / 2};
    for (int k = 0; k < 2; ++k) {
      cfg.theta = phases[k];
      cfg.seed = seeds();
      const auto traces = simulate(cfg);
      double sum = 0;
      std::size_t count = 0;
      for (std::size_t i = 0; i < traces.squeeze.rows.size(); ++i) {
        const double signal = traces.squeeze.rows[i].raw_power - traces.squeeze.dark_power;
        const double reference = traces.shot.rows[i].raw_power - traces.shot.dark_power;
        if (signal > 0 && reference > 0) {
          sum += signal / reference;
          ++count;
        }
      }
      require(count > 0, "sweep point at " + std::to_string(p) + " mW has no valid dark-corrected samples",
              ErrorCode::Domain);
      level[k] = 10.0 * std::log10(sum / static_cast<double>(count));
    }
    data.squeeze.push_back({p, level[0], level[1], std::nullopt});
  }
  return data;
}

}  // namespace sqz
