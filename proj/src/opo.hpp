#pragma once

// Below-threshold degenerate parametric oscillator: seed gain and
// quadrature variances of the squeezed vacuum under linear loss.
//
// Variances are linear, relative to shot noise = 1. dB values are
// 10*log10(V), so squeezing is negative.

#include "cavity.hpp"

namespace sqz {

struct SqueezerState {
  double pump_ratio = 0;  // P / P_th in [0, 1)
  double eta_esc = 1;
  double eta_det = 1;

  void validate() const;
  double eta_total() const { return eta_esc * eta_det; }
};

struct QuadraturePair {
  double v_minus = 1;
  double v_plus = 1;
  double sqz_db = 0;
  double antisqz_db = 0;

  static QuadraturePair from_linear(double v_minus, double v_plus);
  static QuadraturePair from_db(double sqz_db, double antisqz_db);
};

struct ParametricGain {
  double g_plus = 1;   // amplification
  double g_minus = 1;  // deamplification
};

struct PairInference {
  double eta_total = 0;
  double pump_ratio = 0;
};

double db_from_linear(double v);
double linear_from_db(double d);

// Throws Domain for negative ratios, AboveThreshold for ratio >= 1.
void check_pump_ratio(double pump_ratio);

ParametricGain parametric_gain(double pump_ratio);

QuadraturePair variances(const SqueezerState& state);

/// Closed-form inverse of the lossy variance model: given a measured
/// squeezing / anti-squeezing pair (dB, squeezing negative) recover the
/// total efficiency and the pump ratio. With A = 1 - V-, B = V+ - 1 the
/// ratio B/A equals ((1+x)/(1-x))^2 where x = sqrt(P/P_th).
PairInference infer_from_pair(double sqz_db, double antisqz_db);

/// Lorentzian roll-off of the squeezing with sideband frequency. This is an
/// extension beyond the zero-frequency model; at sideband_hz = 0 it reduces
/// to variances().
QuadraturePair squeezing_spectrum(const SqueezerState& state, const CavityRates& rates, double sideband_hz);

}  // namespace sqz
