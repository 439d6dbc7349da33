#include "design.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "error.hpp"
#include "opo.hpp"

namespace sqz {

namespace {

double round_trip_loss(const CavitySpec& spec) {
  const double propagation = 1.0 - std::pow(10.0, -spec.loss_passes * spec.single_pass_loss_db() / 10.0);
  return (1.0 - spec.r_hr) + propagation;
}

}  // namespace

void DesignSpace::validate() const {
  base.validate();
  chain.validate();
  require(pump_available_w >= 0 && std::isfinite(pump_available_w), "design.pump_available_w must be >= 0");
  require(e_nl > 0, "design.e_nl must be > 0");
  require(r_out_lo > 0 && r_out_lo < r_out_hi && r_out_hi < 1, "design.r_out_range must satisfy 0 < lo < hi < 1");
  require(r_out_step > 0, "design.r_out_step must be > 0");
  require(clip_ratio > 0 && clip_ratio < 1, "design.clip_ratio must lie in (0, 1)");
}

double threshold_power(const CavitySpec& spec, double e_nl) {
  spec.validate();
  require(e_nl > 0, "effective nonlinearity must be > 0");
  const double total = (1.0 - spec.r_out) + round_trip_loss(spec);
  return total * total / (4.0 * e_nl);
}

double calibrate_enl(const CavitySpec& spec, double p_th_observed_w) {
  spec.validate();
  require(p_th_observed_w > 0, "observed threshold must be > 0");
  const double total = (1.0 - spec.r_out) + round_trip_loss(spec);
  return total * total / (4.0 * p_th_observed_w);
}

Prediction predict_detected_sqz(const DesignSpace& space, double r_out, bool strict) {
  space.validate();
  require(r_out >= space.r_out_lo - 1e-12 && r_out <= space.r_out_hi + 1e-12,
          "r_out = " + std::to_string(r_out) + " lies outside design.r_out_range");
  CavitySpec spec = space.base;
  spec.r_out = r_out;
  spec.validate();

  Prediction p;
  p.r_out = r_out;
  p.eta_esc = decay_rates(spec).eta_esc;
  p.p_th_w = threshold_power(spec, space.e_nl);
  p.pump_ratio = space.pump_available_w / p.p_th_w;
  if (p.pump_ratio >= 1 && strict)
    fail(ErrorCode::AboveThreshold, "r_out = " + std::to_string(r_out) + ": pump ratio " +
                                        std::to_string(p.pump_ratio) + " is at or above threshold");
  if (p.pump_ratio > space.clip_ratio) {
    p.pump_ratio = space.clip_ratio;
    p.clipped = true;
  }
  const double det = eta_det(space.chain);
  const auto detected = variances({p.pump_ratio, p.eta_esc, det});
  const auto produced = variances({p.pump_ratio, p.eta_esc, 1.0});
  p.sqz_db = detected.sqz_db;
  p.antisqz_db = detected.antisqz_db;
  p.produced_sqz_db = produced.sqz_db;
  p.produced_antisqz_db = produced.antisqz_db;
  return p;
}

CouplerSweep optimize_coupler(const DesignSpace& space, bool strict) {
  space.validate();
  const auto steps = static_cast<std::size_t>(std::floor((space.r_out_hi - space.r_out_lo) / space.r_out_step + 1e-9));
  CouplerSweep sweep;
  for (std::size_t i = 0; i <= steps; ++i) {
    const double r_out = space.r_out_lo + static_cast<double>(i) * space.r_out_step;
    try {
      sweep.rows.push_back(predict_detected_sqz(space, r_out, strict));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::AboveThreshold) throw;
    }
  }
  if (sweep.rows.empty())
    fail(ErrorCode::Infeasible, "every coupler reflectivity in the range is at or above threshold");
  for (std::size_t i = 1; i < sweep.rows.size(); ++i)
    if (sweep.rows[i].sqz_db < sweep.rows[sweep.best_index].sqz_db) sweep.best_index = i;
  sweep.r_out_best = sweep.rows[sweep.best_index].r_out;
  return sweep;
}

std::string sweep_csv(const CouplerSweep& sweep) {
  std::ostringstream os;
  os.precision(17);
  os << "r_out,eta_esc,p_th_mw,pump_ratio,sqz_db,antisqz_db,clipped\n";
  for (const auto& r : sweep.rows)
    os << r.r_out << ',' << r.eta_esc << ',' << r.p_th_w * 1e3 << ',' << r.pump_ratio << ',' << r.sqz_db << ','
       << r.antisqz_db << ',' << (r.clipped ? 1 : 0) << '\n';
  return os.str();
}

}  // namespace sqz
