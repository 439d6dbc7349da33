#include <doctest.h>

#include "design.hpp"
#include "opo.hpp"
#include "support.hpp"

using namespace sqz;
using testing::error_code_of;
using testing::uniform;

namespace {

DesignSpace reference_space() {
  DesignSpace s;
  s.base = CavitySpec{};
  s.chain = {0.95, 0.92, 0.88};
  s.e_nl = calibrate_enl(s.base, 0.135);
  s.pump_available_w = 0.023;
  return s;
}

}  // namespace

TEST_CASE("nonlinearity calibration on the reference cavity") {
  const CavitySpec spec{};
  const double e_nl = calibrate_enl(spec, 0.135);
  CHECK(e_nl == doctest::Approx(0.152).epsilon(0.001 / 0.152));
  const double l = (1 - 0.99) + (1 - std::pow(10.0, -2 * 0.13 * 0.8 / 10));
  CHECK(e_nl == doctest::Approx((0.23 + l) * (0.23 + l) / (4 * 0.135)).epsilon(1e-12));
  CHECK(calibrate_enl(spec, 0.27) == doctest::Approx(e_nl / 2).epsilon(1e-14));
  CHECK(threshold_power(spec, e_nl) == doctest::Approx(0.135).epsilon(1e-12));
}

TEST_CASE("threshold model algebra") {
  CavitySpec a{};
  CavitySpec b = a;
  b.r_out = 1 - (1 - a.r_out) / 2;
  const double l = (1 - a.r_hr) + (1 - std::pow(10.0, -2 * a.single_pass_loss_db() / 10));
  const double expect = ((0.115 + l) / (0.23 + l)) * ((0.115 + l) / (0.23 + l));
  CHECK(threshold_power(b, 0.15) / threshold_power(a, 0.15) == doctest::Approx(expect).epsilon(1e-12));

  CavitySpec tiny{};
  tiny.r_out = 1 - 1e-9;
  tiny.r_hr = 1;
  tiny.loss_db_per_cm = 0;
  CHECK(threshold_power(tiny, 0.15) < 1e-15);
}

TEST_CASE("threshold increases with every loss channel") {
  for (int i = 0; i < 300; ++i) {
    CavitySpec s{uniform(1, 20), 2.138, uniform(0, 1), uniform(0.5, 0.98), uniform(0.95, 1), 2};
    const double e_nl = uniform(0.01, 1);
    CavitySpec more_coupled = s, lossier = s;
    more_coupled.r_out -= 0.01;
    lossier.loss_db_per_cm += 0.05;
    CHECK(threshold_power(more_coupled, e_nl) > threshold_power(s, e_nl));
    CHECK(threshold_power(lossier, e_nl) > threshold_power(s, e_nl));
    const double p = uniform(1e-3, 1);
    CHECK(threshold_power(s, calibrate_enl(s, p)) == doctest::Approx(p).epsilon(1e-12));
  }
}

TEST_CASE("prediction at the reference operating point") {
  auto space = reference_space();
  space.pump_available_w = 0.18 * 0.135;
  const auto p = predict_detected_sqz(space, 0.77);
  CHECK(p.pump_ratio == doctest::Approx(0.18).epsilon(1e-12));
  CHECK(p.produced_sqz_db == doctest::Approx(-4.9).epsilon(0.1 / 4.9));
  CHECK(p.sqz_db > p.produced_sqz_db);
  CHECK_FALSE(p.clipped);

  space.pump_available_w = 0;
  const auto off = predict_detected_sqz(space, 0.77);
  CHECK(off.sqz_db == 0.0);
  CHECK(off.antisqz_db == 0.0);
}

TEST_CASE("near-threshold clipping and strict mode") {
  auto space = reference_space();
  space.pump_available_w = 1.0;
  const auto p = predict_detected_sqz(space, 0.77);
  CHECK(p.clipped);
  CHECK(p.pump_ratio == 0.99);
  CHECK(error_code_of([&] { predict_detected_sqz(space, 0.77, true); }) == ErrorCode::AboveThreshold);
  CHECK(error_code_of([&] { optimize_coupler(space, true); }) == ErrorCode::Infeasible);
  CHECK(error_code_of([&] { predict_detected_sqz(space, 0.3); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("coupler sweep has an interior optimum at fixed pump") {
  const auto sweep = optimize_coupler(reference_space());
  REQUIRE(sweep.rows.size() == 49);
  CHECK(sweep.best_index > 0);
  CHECK(sweep.best_index + 1 < sweep.rows.size());
  CHECK(sweep.r_out_best == doctest::Approx(0.82).epsilon(0.02));
  for (const auto& r : sweep.rows) CHECK(sweep.rows[sweep.best_index].sqz_db <= r.sqz_db);

  // Slope of the objective changes sign across the optimum.
  const auto& rows = sweep.rows;
  const std::size_t b = sweep.best_index;
  CHECK(rows[b - 1].sqz_db > rows[b].sqz_db);
  CHECK(rows[b + 1].sqz_db > rows[b].sqz_db);
}

TEST_CASE("lossless cavity with ample pump favours heavier coupling") {
  auto space = reference_space();
  space.base.loss_db_per_cm = 0;
  space.base.r_hr = 1;
  space.pump_available_w = 10.0;
  space.clip_ratio = 0.5;
  space.r_out_lo = 0.5;
  space.r_out_hi = 0.9;
  const auto sweep = optimize_coupler(space);
  for (const auto& r : sweep.rows) {
    CHECK(r.eta_esc == 1.0);
    CHECK(r.sqz_db == doctest::Approx(sweep.rows[0].sqz_db).epsilon(1e-12));
  }

  auto lossy = reference_space();
  lossy.pump_available_w = 10.0;
  lossy.clip_ratio = 0.5;
  const auto lsweep = optimize_coupler(lossy);
  for (std::size_t i = 1; i < lsweep.rows.size(); ++i) CHECK(lsweep.rows[i].sqz_db > lsweep.rows[i - 1].sqz_db);
  CHECK(lsweep.best_index == 0);
}

TEST_CASE("grid refinement moves the optimum by less than one coarse step") {
  auto space = reference_space();
  const double coarse = optimize_coupler(space).r_out_best;
  space.r_out_step = 0.001;
  const double fine = optimize_coupler(space).r_out_best;
  CHECK(std::fabs(fine - coarse) < 0.01);
}

TEST_CASE("sweep rows are reproducible one by one") {
  const auto space = reference_space();
  const auto sweep = optimize_coupler(space);
  for (const auto& r : sweep.rows) {
    const auto again = predict_detected_sqz(space, r.r_out);
    CHECK(again.sqz_db == r.sqz_db);
    CHECK(again.p_th_w == r.p_th_w);
    CHECK(again.produced_sqz_db <= again.sqz_db);
  }
  const auto csv = sweep_csv(sweep);
  CHECK(csv.rfind("r_out,eta_esc,p_th_mw,pump_ratio,sqz_db,antisqz_db,clipped\n", 0) == 0);
}
