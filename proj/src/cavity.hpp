#pragma once

// Linear (no-gain) optics of a two-mirror standing-wave waveguide resonator.

namespace sqz {

inline constexpr double kSpeedOfLight = 2.99792458e8;  // m/s

struct CavitySpec {
  double length_mm = 8.0;        // physical one-way length
  double ref_index = 2.138;      // phase index
  double loss_db_per_cm = 0.13;  // propagation loss
  double r_out = 0.77;           // output coupler power reflectivity
  double r_hr = 0.99;            // back mirror power reflectivity
  int loss_passes = 2;           // medium passes per round trip (1 or 2)

  void validate() const;
  // Single-pass propagation loss in dB.
  double single_pass_loss_db() const { return loss_db_per_cm * length_mm / 10.0; }
};

struct CavityRates {
  double tau = 0;         // round-trip time, s
  double gamma_coup = 0;  // s^-1
  double gamma_hr = 0;
  double gamma_loss = 0;
  double gamma_tot = 0;
  double eta_esc = 0;
  double fwhm_bandwidth = 0;  // Hz
  double fsr = 0;             // Hz
};

enum class ProbeSide { Coupler, HighReflector };

struct AiryResponse {
  double transmission = 0;
  double reflection = 0;
};

double round_trip_time(const CavitySpec& spec);

/// Per-channel field decay rates (1 - sqrt(R_i)) / tau. Propagation loss is
/// mapped onto an equivalent mirror whose amplitude factor per round trip is
/// 10^(-passes * alpha * L / 20).
CavityRates decay_rates(const CavitySpec& spec);

/// Steady-state power transmission/reflection of the lossy Fabry-Perot,
/// either exactly on resonance or at anti-resonance.
AiryResponse airy_response(const CavitySpec& spec, ProbeSide side, bool on_resonance);

/// One-way length (mm) for which the escape efficiency equals `target`,
/// holding every other field of `spec` fixed.
double length_for_escape_efficiency(const CavitySpec& spec, double target);

}  // namespace sqz
