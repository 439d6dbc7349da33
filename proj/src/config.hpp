#pragma once

// JSON run configuration (versioned, "schema": 1).
//
// {
//   "schema": 1,
//   "cavity":    {"length_mm", "ref_index", "loss_db_per_cm", "r_out", "r_hr", "loss_passes"?},
//   "detection": {"visibility", "eta_prop", "eta_pd"},
//   "pump":      {"power_mw", "p_th_mw" | "e_nl_per_w"},
//   "sim":       {...TraceConfig fields...}?,
//   "design":    {"r_out_range": [lo, hi], "r_out_step", "clip_ratio"?}?
// }

#include <optional>
#include <string>
#include <string_view>

#include "budget.hpp"
#include "cavity.hpp"
#include "design.hpp"
#include "simtrace.hpp"

namespace sqz {

inline constexpr int kConfigSchema = 1;

struct PumpConfig {
  double power_mw = 0;
  std::optional<double> p_th_mw;
  std::optional<double> e_nl_per_w;
};

struct DesignRange {
  double lo = 0.5;
  double hi = 0.98;
  double step = 0.01;
  double clip_ratio = 0.99;
};

struct RunConfig {
  CavitySpec cavity;
  DetectionChain detection;
  std::optional<PumpConfig> pump;
  std::optional<TraceConfig> sim;  // state is filled in by trace_config()
  std::optional<DesignRange> design;

  void validate() const;

  const PumpConfig& require_pump() const;
  // Incident threshold in mW: given directly, or from the threshold model.
  double threshold_mw() const;
  // Effective nonlinearity: given directly, or calibrated on the threshold.
  double e_nl_per_w() const;
  double eta_esc() const;
  double eta_det() const;
  SqueezerState squeezer_state(double pump_mw) const;
  TraceConfig trace_config() const;
  DesignSpace design_space() const;
};

RunConfig parse_config(std::string_view json_text, std::string_view source = "<memory>");
RunConfig load_config(const std::string& path);

}  // namespace sqz
