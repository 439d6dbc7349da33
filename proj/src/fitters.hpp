#pragma once

#include "cavity.hpp"
#include "dataset.hpp"
#include "lsq.hpp"

namespace sqz {

/// Threshold from seeded amplification/deamplification data. Both gain
/// branches are fitted jointly in linear space. Reports "p_th_mw".
FitResult fit_threshold_from_gain(const DataSet& data, const LsqOptions& opts = {});

struct SqueezeFitSetup {
  double eta_esc = 1;
  double eta_det = 1;     // fixed value, or initial guess when free
  bool free_eta_det = false;
};

/// Threshold (and optionally detection efficiency) from a pump-power sweep of
/// squeezing/anti-squeezing levels. Residuals are in dB.
/// Reports "p_th_mw" and, when free, "eta_det".
FitResult fit_squeeze_sweep(const DataSet& data, const SqueezeFitSetup& setup, const LsqOptions& opts = {});

struct CavityKnowns {
  double r_out = 0.77;
  double length_mm = 8.0;
  double ref_index = 2.138;
  int loss_passes = 2;
};

/// Back-mirror reflectivity and propagation loss from on/off-resonance
/// transmission and reflection fractions. Reports "r_hr" and "loss_db_per_cm".
FitResult characterize_cavity(const DataSet& data, const CavityKnowns& known, ProbeSide side = ProbeSide::Coupler,
                              const LsqOptions& opts = {});

}  // namespace sqz
