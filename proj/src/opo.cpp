#include "opo.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "error.hpp"

namespace sqz {

void check_pump_ratio(double pump_ratio) {
  if (!std::isfinite(pump_ratio) || pump_ratio < 0)
    fail(ErrorCode::Domain, "pump ratio must be >= 0, got " + std::to_string(pump_ratio));
  if (pump_ratio >= 1)
    fail(ErrorCode::AboveThreshold,
         "pump ratio " + std::to_string(pump_ratio) + " is at or above threshold; model is below-threshold only");
}

void SqueezerState::validate() const {
  check_pump_ratio(pump_ratio);
  require(eta_esc > 0 && eta_esc <= 1, "eta_esc must lie in (0, 1]");
  require(eta_det > 0 && eta_det <= 1, "eta_det must lie in (0, 1]");
}

QuadraturePair QuadraturePair::from_linear(double v_minus, double v_plus) {
  return {v_minus, v_plus, db_from_linear(v_minus), db_from_linear(v_plus)};
}

QuadraturePair QuadraturePair::from_db(double sqz_db, double antisqz_db) {
  return {linear_from_db(sqz_db), linear_from_db(antisqz_db), sqz_db, antisqz_db};
}

double db_from_linear(double v) {
  if (!(v > 0)) fail(ErrorCode::Domain, "linear variance must be > 0, got " + std::to_string(v));
  return 10.0 * std::log10(v);
}

double linear_from_db(double d) { return std::pow(10.0, d / 10.0); }

ParametricGain parametric_gain(double pump_ratio) {
  check_pump_ratio(pump_ratio);
  const double x = std::sqrt(pump_ratio);
  const double below = (1.0 - pump_ratio) * (1.0 - pump_ratio);
  return {(1.0 + x) * (1.0 + x) / below, (1.0 - x) * (1.0 - x) / below};
}

QuadraturePair variances(const SqueezerState& state) {
  state.validate();
  const double x = std::sqrt(state.pump_ratio);
  const double eta = state.eta_total();
  // 1 - 4 eta x / (1+x)^2 rewritten without cancellation near threshold.
  const double up = (1.0 + x) * (1.0 + x), dn = (1.0 - x) * (1.0 - x);
  const double v_minus = (dn + 4.0 * x * (1.0 - eta)) / up;
  const double v_plus = (up - 4.0 * x * (1.0 - eta)) / dn;
  return QuadraturePair::from_linear(v_minus, v_plus);
}

PairInference infer_from_pair(double sqz_db, double antisqz_db) {
  if (!(sqz_db < 0))
    fail(ErrorCode::Domain, "non-physical pair: squeezing level must be below shot noise (V- < 1)");
  if (!(antisqz_db > 0))
    fail(ErrorCode::Domain, "non-physical pair: anti-squeezing level must be above shot noise (V+ > 1)");
  const double a = 1.0 - linear_from_db(sqz_db);
  const double b = linear_from_db(antisqz_db) - 1.0;
  if (!(b > a))
    fail(ErrorCode::Domain, "non-physical pair: anti-squeezing excess must exceed squeezing depth (B > A)");

  const double root = std::sqrt(b / a);
  const double x = (root - 1.0) / (root + 1.0);
  double eta = a * (1.0 + x) * (1.0 + x) / (4.0 * x);
  // Allow round-off from the dB conversion at the lossless boundary.
  if (eta > 1.0 + 1e-9)
    fail(ErrorCode::Domain, "non-physical pair: implied total efficiency " + std::to_string(eta) + " exceeds 1");
  if (eta > 1.0) eta = 1.0;
  return {eta, x * x};
}

QuadraturePair squeezing_spectrum(const SqueezerState& state, const CavityRates& rates, double sideband_hz) {
  state.validate();
  require(sideband_hz >= 0 && std::isfinite(sideband_hz), "sideband frequency must be >= 0");
  require(rates.gamma_tot > 0, "cavity decay rate must be > 0");
  const double x = std::sqrt(state.pump_ratio);
  const double eta = state.eta_total();
  const double w = 2.0 * std::numbers::pi * sideband_hz / rates.gamma_tot;
  const double up = (1.0 + x) * (1.0 + x) + w * w, dn = (1.0 - x) * (1.0 - x) + w * w;
  const double v_minus = (dn + 4.0 * x * (1.0 - eta)) / up;
  const double v_plus = (up - 4.0 * x * (1.0 - eta)) / dn;
  return QuadraturePair::from_linear(v_minus, v_plus);
}

}  // namespace sqz
