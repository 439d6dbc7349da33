#pragma once

// Variance-domain Monte-Carlo of a spectrum-analyzer homodyne record.
//
// Each displayed point is the true noise power (variance + dark) times a
// chi-square estimator fluctuation with N_eff = max(1, rbw/vbw) degrees of
// freedom, i.e. relative std sqrt(2/N_eff). Powers are linear relative to
// shot noise = 1; dark noise is an additive constant 10^(-clearance/10).

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "opo.hpp"

namespace sqz {

enum class PhaseMode { Scanned, Drift, Fixed };
enum class ScanWaveform { Triangle, Sawtooth };

struct TraceConfig {
  SqueezerState state;
  double duration_s = 1.0;
  double sample_rate = 1000.0;
  PhaseMode phase_mode = PhaseMode::Scanned;
  double scan_period_s = 0.5;
  ScanWaveform waveform = ScanWaveform::Triangle;
  double drift_diffusion = 0;  // rad^2/s; <= 0 picks pi^2/duration
  double theta = 0;            // fixed phase, rad
  double phase_jitter_rad = 0;
  double rbw_hz = 20e3;
  double vbw_hz = 10.0;
  double dark_clearance_db = 12.0;
  int shot_averages = 20;
  std::uint64_t seed = 1;

  void validate() const;
  double effective_samples() const;
  double dark_power() const;
};

struct TraceRow {
  double time_s = 0;
  double phase_rad = 0;
  double raw_power = 0;  // linear, dark included
  double raw_db = 0;     // relative to the dark-inclusive shot level 1 + dark
  double corrected_db = 0;
  bool corrected_valid = false;
};

struct Trace {
  std::string label;
  TraceConfig config;
  double dark_power = 0;
  std::vector<TraceRow> rows;
};

struct SimulatedTraces {
  Trace shot;
  Trace squeeze;
};

// V(theta) = V- cos^2(theta) + V+ sin^2(theta).
double variance_at_phase(const QuadraturePair& pair, double theta);

// Gaussian phase jitter of std sigma averaged analytically.
double variance_at_phase(const QuadraturePair& pair, double theta, double jitter_sigma);

SimulatedTraces simulate(const TraceConfig& config);

/// (P_raw - P_dark) / (P_shot - P_dark) point by point. Points where either
/// power does not exceed the dark level are flagged invalid.
Trace dark_correct(const Trace& raw, const Trace& shot_raw);

void write_trace_csv(const Trace& trace, const std::string& path);
std::string trace_csv(const Trace& trace);

/// Fixed-phase traces at theta = 0 and pi/2 for each pump power, averaged
/// after dark correction, as a squeeze data set ready for fit_squeeze_sweep.
DataSet simulate_sweep(const TraceConfig& base, std::span<const double> pump_mw, double p_th_mw);

}  // namespace sqz
