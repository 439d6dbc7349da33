#include "fitters.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "error.hpp"
#include "opo.hpp"

namespace sqz {

namespace {

// Pump powers enter through s = P_max / P_th in (0, 1), so every row stays
// strictly below threshold and P_th stays positive.
constexpr double kBoundaryEps = 1e-9;

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double initial_scale(const std::vector<double>& threshold_guesses, double p_max) {
  if (threshold_guesses.empty()) return 0.3;
  return std::clamp(p_max / median(threshold_guesses), 0.01, 0.99);
}

void convert_scale_to_threshold(FitResult& fit, double p_max) {
  const double s = fit.params[0];
  fit.names[0] = "p_th_mw";
  fit.params[0] = p_max / s;
  fit.stderr_[0] = p_max / (s * s) * fit.stderr_[0];
  if (s > 1.0 - kBoundaryEps || s < kBoundaryEps) {
    fit.converged = false;
    fit.diagnostic += "threshold driven to the edge of the below-threshold domain; data inconsistent with the model; ";
  }
}

double max_pump(const std::vector<double>& pumps) {
  const double p_max = *std::max_element(pumps.begin(), pumps.end());
  require(p_max > 0, "at least one row needs a positive pump power");
  return p_max;
}

}  // namespace

FitResult fit_threshold_from_gain(const DataSet& data, const LsqOptions& opts) {
  require(data.kind == DataKind::Gain, "fit_threshold_from_gain needs gain data");
  data.validate();
  require(data.rows() >= 3, "too few points: gain fit needs at least 3 rows, got " + std::to_string(data.rows()));

  std::vector<double> pumps, guesses;
  bool any_deamplified = false;
  for (const auto& r : data.gain) {
    pumps.push_back(r.pump_mw);
    if (r.g_minus < 1.0) any_deamplified = true;
    const double q = r.g_plus / r.g_minus;
    if (r.pump_mw > 0 && q > 1) {
      const double root = std::sqrt(q);
      const double x = (root - 1) / (root + 1);
      guesses.push_back(r.pump_mw / (x * x));
    }
  }
  const double p_max = max_pump(pumps);

  const auto residuals = [&](std::span<const double> p) {
    const double p_th = p_max / p[0];
    std::vector<double> out;
    out.reserve(2 * data.gain.size());
    for (const auto& r : data.gain) {
      const auto g = parametric_gain(r.pump_mw / p_th);
      out.push_back((g.g_plus - r.g_plus) / r.g_plus_err.value_or(1.0));
      out.push_back((g.g_minus - r.g_minus) / r.g_minus_err.value_or(1.0));
    }
    return out;
  };
  const ParamSpec params[] = {{"scale", initial_scale(guesses, p_max), BoundKind::Interval, 0.0, 1.0}};
  FitResult fit = least_squares(residuals, params, opts);
  convert_scale_to_threshold(fit, p_max);
  if (!any_deamplified) {
    fit.converged = false;
    fit.diagnostic += "deamplification branch never falls below 1; no below-threshold p_th is consistent; ";
  }
  return fit;
}

FitResult fit_squeeze_sweep(const DataSet& data, const SqueezeFitSetup& setup, const LsqOptions& opts) {
  require(data.kind == DataKind::Squeeze, "fit_squeeze_sweep needs squeeze data");
  data.validate();
  require(data.rows() >= 3, "too few points: squeeze fit needs at least 3 rows, got " + std::to_string(data.rows()));
  require(setup.eta_esc > 0 && setup.eta_esc <= 1, "eta_esc must lie in (0, 1]");
  require(setup.eta_det > 0 && setup.eta_det <= 1, "eta_det must lie in (0, 1]");

  std::vector<double> pumps, guesses;
  std::string implied_diag;
  for (std::size_t i = 0; i < data.squeeze.size(); ++i) {
    const auto& r = data.squeeze[i];
    pumps.push_back(r.pump_mw);
    try {
      const auto inv = infer_from_pair(r.sqz_db, r.antisqz_db);
      if (r.pump_mw > 0 && inv.pump_ratio > 0) guesses.push_back(r.pump_mw / inv.pump_ratio);
    } catch (const Error& e) {
      if (std::string(e.what()).find("exceeds 1") != std::string::npos)
        implied_diag += "row " + std::to_string(i + 1) + ": " + e.what() + "; ";
    }
  }
  const double p_max = max_pump(pumps);

  const auto residuals = [&](std::span<const double> p) {
    const double p_th = p_max / p[0];
    const double eta_det = setup.free_eta_det ? p[1] : setup.eta_det;
    std::vector<double> out;
    out.reserve(2 * data.squeeze.size());
    for (const auto& r : data.squeeze) {
      const auto q = variances({r.pump_mw / p_th, setup.eta_esc, eta_det});
      const double w = r.err_db.value_or(1.0);
      out.push_back((q.sqz_db - r.sqz_db) / w);
      out.push_back((q.antisqz_db - r.antisqz_db) / w);
    }
    return out;
  };
  std::vector<ParamSpec> params = {{"scale", initial_scale(guesses, p_max), BoundKind::Interval, 0.0, 1.0}};
  if (setup.free_eta_det) params.push_back({"eta_det", setup.eta_det, BoundKind::Interval, 0.0, 1.0});

  FitResult fit = least_squares(residuals, params, opts);
  convert_scale_to_threshold(fit, p_max);
  if (setup.free_eta_det && fit.params[1] > 1.0 - 1e-6) {
    fit.converged = false;
    fit.diagnostic += "fitted eta_det is pinned at 1; the data imply more efficiency than the model allows; ";
  }
  if (!implied_diag.empty()) {
    fit.converged = false;
    fit.diagnostic += "implied total efficiency above 1: " + implied_diag;
  }
  return fit;
}

FitResult characterize_cavity(const DataSet& data, const CavityKnowns& known, ProbeSide side, const LsqOptions& opts) {
  require(data.kind == DataKind::FpResponse, "characterize_cavity needs fp_response data");
  data.validate();
  std::set<FpQuantity> distinct;
  for (const auto& r : data.fp) distinct.insert(r.quantity);
  require(distinct.size() >= 2, "characterization needs at least two distinct measured quantities");

  CavitySpec base;
  base.r_out = known.r_out;
  base.length_mm = known.length_mm;
  base.ref_index = known.ref_index;
  base.loss_passes = known.loss_passes;
  base.r_hr = 0.99;
  base.loss_db_per_cm = 0.0;
  base.validate();

  const auto residuals = [&](std::span<const double> p) {
    CavitySpec spec = base;
    spec.r_hr = p[0];
    spec.loss_db_per_cm = p[1];
    const auto on = airy_response(spec, side, true);
    const auto off = airy_response(spec, side, false);
    std::vector<double> out;
    out.reserve(data.fp.size());
    for (const auto& r : data.fp) {
      double model = 0;
      switch (r.quantity) {
        case FpQuantity::TransOn:
          model = on.transmission;
          break;
        case FpQuantity::TransOff:
          model = off.transmission;
          break;
        case FpQuantity::ReflOn:
          model = on.reflection;
          break;
        case FpQuantity::ReflOff:
          model = off.reflection;
          break;
      }
      if (r.err)
        out.push_back((model - r.value) / *r.err);
      else if (r.value > 0)
        out.push_back(model / r.value - 1.0);
      else
        out.push_back(model);
    }
    return out;
  };
  const ParamSpec params[] = {
      {"r_hr", 0.98, BoundKind::Interval, 0.0, 1.0},
      {"loss_db_per_cm", 0.1, BoundKind::Lower, 0.0, 0.0},
  };
  return least_squares(residuals, params, opts);
}

}  // namespace sqz
