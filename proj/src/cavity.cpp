#include "cavity.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "error.hpp"

namespace sqz {

void CavitySpec::validate() const {
  require(std::isfinite(length_mm) && length_mm > 0, "cavity.length_mm must be > 0");
  require(std::isfinite(ref_index) && ref_index >= 1, "cavity.ref_index must be >= 1");
  require(std::isfinite(loss_db_per_cm) && loss_db_per_cm >= 0, "cavity.loss_db_per_cm must be >= 0");
  require(r_out > 0 && r_out < 1, "cavity.r_out must lie in (0, 1)");
  require(r_hr > 0 && r_hr <= 1, "cavity.r_hr must lie in (0, 1]");
  require(loss_passes == 1 || loss_passes == 2, "cavity.loss_passes must be 1 or 2");
}

double round_trip_time(const CavitySpec& spec) {
  spec.validate();
  return 2.0 * spec.ref_index * spec.length_mm * 1e-3 / kSpeedOfLight;
}

CavityRates decay_rates(const CavitySpec& spec) {
  const double tau = round_trip_time(spec);
  const double loss_amplitude = std::pow(10.0, -spec.loss_passes * spec.single_pass_loss_db() / 20.0);
  if (!(loss_amplitude > 0))
    fail(ErrorCode::Domain, "propagation loss of " + std::to_string(spec.single_pass_loss_db()) +
                                " dB per pass underflows the round-trip amplitude");

  CavityRates r;
  r.tau = tau;
  r.gamma_coup = (1.0 - std::sqrt(spec.r_out)) / tau;
  r.gamma_hr = (1.0 - std::sqrt(spec.r_hr)) / tau;
  r.gamma_loss = (1.0 - loss_amplitude) / tau;
  r.gamma_tot = r.gamma_coup + r.gamma_hr + r.gamma_loss;
  r.eta_esc = r.gamma_coup / r.gamma_tot;
  // gamma is an angular field half-width; power FWHM in Hz is 2*gamma/(2*pi).
  r.fwhm_bandwidth = r.gamma_tot / std::numbers::pi;
  r.fsr = 1.0 / tau;
  return r;
}

AiryResponse airy_response(const CavitySpec& spec, ProbeSide side, bool on_resonance) {
  spec.validate();
  // a*a is the round-trip field attenuation, so a is one pass for a standing wave.
  const double a = std::pow(10.0, -spec.loss_passes * spec.single_pass_loss_db() / 40.0);
  double r_in = std::sqrt(spec.r_out), r_back = std::sqrt(spec.r_hr);
  if (side == ProbeSide::HighReflector) std::swap(r_in, r_back);
  const double t_in = std::sqrt(1.0 - r_in * r_in);
  const double t_back = std::sqrt(1.0 - r_back * r_back);

  const double sign = on_resonance ? -1.0 : 1.0;
  const double round_trip = r_in * r_back * a * a;
  const double denom = (1.0 + sign * round_trip) * (1.0 + sign * round_trip);
  const double num_r = r_in + sign * r_back * a * a;

  AiryResponse out;
  out.transmission = (t_in * t_back * a) * (t_in * t_back * a) / denom;
  out.reflection = num_r * num_r / denom;
  return out;
}

double length_for_escape_efficiency(const CavitySpec& spec, double target) {
  spec.validate();
  require(target > 0 && target <= 1, "target escape efficiency must lie in (0, 1]");
  const double coup = 1.0 - std::sqrt(spec.r_out);
  const double hr = 1.0 - std::sqrt(spec.r_hr);
  const double needed_loss = coup / target - coup - hr;  // round-trip amplitude loss fraction
  if (needed_loss <= 0)
    fail(ErrorCode::Infeasible, "target escape efficiency exceeds the lossless limit " +
                                    std::to_string(coup / (coup + hr)));
  require(needed_loss < 1, "target escape efficiency requires total round-trip extinction", ErrorCode::Infeasible);
  require(spec.loss_db_per_cm > 0, "zero propagation loss cannot reach a finite length", ErrorCode::Infeasible);
  const double loss_db = -20.0 * std::log10(1.0 - needed_loss) / spec.loss_passes;
  return loss_db / spec.loss_db_per_cm * 10.0;
}

}  // namespace sqz
