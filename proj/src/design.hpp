#pragma once

#include <string>
#include <vector>

#include "budget.hpp"
#include "cavity.hpp"

namespace sqz {

struct DesignSpace {
  CavitySpec base;  // r_out is the swept variable
  DetectionChain chain;
  double pump_available_w = 0.023;
  double e_nl = 0.15;  // effective single-pass nonlinearity, W^-1
  double r_out_lo = 0.5;
  double r_out_hi = 0.98;
  double r_out_step = 0.01;
  double clip_ratio = 0.99;

  void validate() const;
};

/// Below-threshold scaling P_th = (T_c + l_rt)^2 / (4 e_nl), where T_c is the
/// coupler transmission and l_rt the remaining round-trip power loss (back
/// mirror plus propagation). Kept behind this one function so another
/// scaling can replace it.
double threshold_power(const CavitySpec& spec, double e_nl);

double calibrate_enl(const CavitySpec& spec, double p_th_observed_w);

struct Prediction {
  double r_out = 0;
  double eta_esc = 0;
  double p_th_w = 0;
  double pump_ratio = 0;
  bool clipped = false;
  double sqz_db = 0;  // detected
  double antisqz_db = 0;
  double produced_sqz_db = 0;  // leaving the device (eta_det = 1)
  double produced_antisqz_db = 0;
};

Prediction predict_detected_sqz(const DesignSpace& space, double r_out, bool strict = false);

struct CouplerSweep {
  double r_out_best = 0;
  std::size_t best_index = 0;
  std::vector<Prediction> rows;
};

CouplerSweep optimize_coupler(const DesignSpace& space, bool strict = false);

std::string sweep_csv(const CouplerSweep& sweep);

}  // namespace sqz
