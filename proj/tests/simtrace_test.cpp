#include <doctest.h>

#include <algorithm>
#include <numbers>
#include <numeric>

#include "simtrace.hpp"
#include "support.hpp"

using namespace sqz;
using testing::error_code_of;

namespace {

constexpr double kPi = std::numbers::pi;

TraceConfig reference_trace() {
  TraceConfig c;
  c.state = {0.18, 0.81, 0.72};
  return c;
}

struct Stats {
  double mean = 0, var = 0;
  std::size_t n = 0;
};

template <class F>
Stats stats_of(const Trace& t, F&& pick) {
  Stats s;
  for (const auto& r : t.rows) s.mean += pick(r), ++s.n;
  s.mean /= static_cast<double>(s.n);
  for (const auto& r : t.rows) s.var += (pick(r) - s.mean) * (pick(r) - s.mean);
  s.var /= static_cast<double>(s.n - 1);
  return s;
}

double raw(const TraceRow& r) { return r.raw_power; }

Trace from_powers(std::vector<double> powers, double dark) {
  Trace t;
  t.dark_power = dark;
  for (double p : powers) {
    TraceRow r;
    r.raw_power = p;
    t.rows.push_back(r);
  }
  return t;
}

}  // namespace

TEST_CASE("variance at phase") {
  const auto q = QuadraturePair::from_linear(0.5, 4.0);
  CHECK(variance_at_phase(q, 0) == 0.5);
  CHECK(variance_at_phase(q, kPi / 2) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(variance_at_phase(q, kPi / 4) == doctest::Approx(2.25).epsilon(1e-15));
  for (int i = 0; i < 100; ++i) {
    const double v = variance_at_phase(q, testing::uniform(-10, 10));
    CHECK(v >= 0.5 - 1e-15);
    CHECK(v <= 4.0 + 1e-15);
  }
}

TEST_CASE("phase jitter is the Gaussian average of the projection") {
  const auto q = QuadraturePair::from_linear(0.5, 4.0);
  CHECK(variance_at_phase(q, 0.3, 0.0) == variance_at_phase(q, 0.3));
  const double sigma = 0.2;
  double num = 0, den = 0;
  for (int k = -10000; k <= 10000; ++k) {
    const double d = k * 1e-3 * sigma;
    const double w = std::exp(-d * d / (2 * sigma * sigma));
    num += w * variance_at_phase(q, d);
    den += w;
  }
  CHECK(variance_at_phase(q, 0.0, sigma) == doctest::Approx(num / den).epsilon(1e-9));
  CHECK(variance_at_phase(q, 0.0, 10.0) == doctest::Approx(2.25).epsilon(1e-12));
}

TEST_CASE("seeded simulation is bit-identical") {
  const auto a = simulate(reference_trace());
  const auto b = simulate(reference_trace());
  REQUIRE(a.squeeze.rows.size() == 1000);
  for (std::size_t i = 0; i < a.squeeze.rows.size(); ++i) {
    CHECK(a.squeeze.rows[i].raw_power == b.squeeze.rows[i].raw_power);
    CHECK(a.shot.rows[i].raw_power == b.shot.rows[i].raw_power);
  }
  CHECK(trace_csv(a.squeeze) == trace_csv(b.squeeze));
  auto other = reference_trace();
  other.seed = 2;
  CHECK(simulate(other).squeeze.rows[0].raw_power != a.squeeze.rows[0].raw_power);
}

TEST_CASE("shot trace statistics") {
  auto c = reference_trace();
  c.shot_averages = 1;
  c.duration_s = 10;  // 1e4 points
  const auto t = simulate(c);
  const auto s = stats_of(t.shot, raw);
  const double level = 1 + c.dark_power();
  const double rel_std = std::sqrt(2.0 / 2000.0);
  CHECK(std::fabs(s.mean - level) < 3 * rel_std * level / std::sqrt(s.n));
  CHECK(std::sqrt(s.var) / level == doctest::Approx(rel_std).epsilon(0.2));
  CHECK(rel_std == doctest::Approx(0.032).epsilon(0.02));

  c.shot_averages = 16;
  const auto averaged = stats_of(simulate(c).shot, raw);
  CHECK(std::sqrt(s.var / averaged.var) == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("no pump: squeeze trace is indistinguishable from a single-shot reference") {
  // Welch t and F tests at the 1% level over independent seeds; the rejection
  // count must be consistent with the test size.
  int t_rejects = 0, f_rejects = 0;
  const int runs = 20;
  for (int seed = 1; seed <= runs; ++seed) {
    TraceConfig c;
    c.state = {0, 0.81, 0.72};
    c.shot_averages = 1;
    c.duration_s = 5;
    c.seed = seed;
    const auto t = simulate(c);
    const auto a = stats_of(t.shot, raw), b = stats_of(t.squeeze, raw);
    const double welch = (a.mean - b.mean) / std::sqrt(a.var / a.n + b.var / b.n);
    if (std::fabs(welch) > 2.576) ++t_rejects;
    const double f = a.var / b.var;  // 4999/4999 dof, two-sided 1%
    if (f < 0.9297 || f > 1.0756) ++f_rejects;
  }
  // P(X >= 3) for X ~ Binomial(20, 0.01) is about 1e-3.
  CHECK(t_rejects <= 2);
  CHECK(f_rejects <= 2);
}

TEST_CASE("ensemble mean at fixed phase converges to the projection") {
  auto c = reference_trace();
  c.phase_mode = PhaseMode::Fixed;
  c.theta = 0.4;
  c.duration_s = 0.05;
  const int m = 200;
  std::vector<double> means;
  for (int k = 0; k < m; ++k) {
    c.seed = 100 + k;
    const auto t = simulate(c);
    double sum = 0;
    for (std::size_t i = 0; i < t.squeeze.rows.size(); ++i)
      sum += (t.squeeze.rows[i].raw_power - t.squeeze.dark_power) /
             (t.shot.rows[i].raw_power - t.shot.dark_power);
    means.push_back(sum / t.squeeze.rows.size());
  }
  const double mean = std::accumulate(means.begin(), means.end(), 0.0) / m;
  double var = 0;
  for (double x : means) var += (x - mean) * (x - mean);
  const double sigma = std::sqrt(var / (m - 1));
  CHECK(std::fabs(mean - variance_at_phase(variances(c.state), 0.4)) < 3 * sigma / std::sqrt(m));
}

TEST_CASE("scanned envelope approaches the quadrature extremes") {
  const auto pair = variances(reference_trace().state);
  auto envelope = [](const TraceConfig& c) {
    const auto t = simulate(c);
    double lo = 1e9, hi = -1e9;
    for (const auto& r : t.squeeze.rows) {
      REQUIRE(r.corrected_valid);
      lo = std::min(lo, r.corrected_db);
      hi = std::max(hi, r.corrected_db);
    }
    return std::pair{lo, hi};
  };
  auto quiet = reference_trace();
  quiet.vbw_hz = quiet.vbw_hz / 1e4;
  const auto [lo, hi] = envelope(quiet);
  CHECK(lo == doctest::Approx(pair.sqz_db).epsilon(0.01));
  CHECK(hi == doctest::Approx(pair.antisqz_db).epsilon(0.01));
  CHECK(lo == doctest::Approx(-2.9).epsilon(0.15 / 2.9));
  CHECK(hi == doctest::Approx(6.0).epsilon(0.15 / 6.0));

  const auto [nlo, nhi] = envelope(reference_trace());
  CHECK(nlo < lo);
  CHECK(nhi > hi);
}

TEST_CASE("drift and sawtooth phase modes") {
  auto c = reference_trace();
  c.waveform = ScanWaveform::Sawtooth;
  const auto saw = simulate(c);
  CHECK(saw.squeeze.rows[499].phase_rad > saw.squeeze.rows[500].phase_rad);
  c.phase_mode = PhaseMode::Drift;
  const auto drift = simulate(c);
  CHECK(drift.squeeze.rows[0].phase_rad == 0.0);
  CHECK(drift.squeeze.rows[999].phase_rad != 0.0);
  CHECK(std::isnan(drift.shot.rows[10].phase_rad));
}

TEST_CASE("dark correction arithmetic") {
  const auto out = dark_correct(from_powers({0.576, 0.05}, 0.0631), from_powers({1.0631, 1.0631}, 0.0631));
  CHECK(std::pow(10.0, out.rows[0].corrected_db / 10) == doctest::Approx(0.513).epsilon(1e-3));
  CHECK(out.rows[0].corrected_db == doctest::Approx(-2.9).epsilon(0.01));
  CHECK_FALSE(out.rows[1].corrected_valid);
  CHECK(std::isnan(out.rows[1].corrected_db));

  const auto ident = dark_correct(from_powers({0.42}, 0.0), from_powers({1.0}, 0.0));
  CHECK(ident.rows[0].corrected_db == doctest::Approx(10 * std::log10(0.42)).epsilon(1e-14));

  CHECK(10 * std::log10((0.513 + 0.0631) / 1.0631) == doctest::Approx(-2.66).epsilon(0.005 / 2.66));
  TraceConfig c;
  CHECK(c.dark_power() == doctest::Approx(0.0631).epsilon(1e-3));

  CHECK(error_code_of([] { dark_correct(from_powers({1, 2}, 0), from_powers({1}, 0)); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("trace csv layout") {
  auto c = reference_trace();
  c.duration_s = 0.003;
  const auto t = simulate(c);
  const auto csv = trace_csv(t.squeeze);
  CHECK(csv.rfind("# sqzkit trace\n", 0) == 0);
  CHECK(csv.find("# schema_version: 1\n") != std::string::npos);
  CHECK(csv.find("# seed: 1\n") != std::string::npos);
  CHECK(csv.find("\ntime_s,phase_rad,raw_db,corrected_db\n") != std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 15 + 3);
  const auto shot_csv = trace_csv(t.shot);
  CHECK(shot_csv.find("\n0,,") != std::string::npos);
}

TEST_CASE("pump sweep produces fit-ready squeeze data") {
  auto c = reference_trace();
  const double pumps[] = {5, 10, 20};
  const auto d = simulate_sweep(c, pumps, 135);
  REQUIRE(d.rows() == 3);
  CHECK(d.kind == DataKind::Squeeze);
  const auto expect = variances({20 / 135.0, 0.81, 0.72});
  CHECK(d.squeeze[2].sqz_db == doctest::Approx(expect.sqz_db).epsilon(0.01));
  CHECK(d.squeeze[2].antisqz_db == doctest::Approx(expect.antisqz_db).epsilon(0.01));
  CHECK(error_code_of([&] { simulate_sweep(c, pumps, 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("trace config validation") {
  auto bad = [](auto mutate) {
    auto c = reference_trace();
    mutate(c);
    return error_code_of([&] { simulate(c); });
  };
  CHECK(bad([](TraceConfig& c) { c.vbw_hz = 3e4; }) == ErrorCode::InvalidArgument);
  CHECK(bad([](TraceConfig& c) { c.duration_s = 0; }) == ErrorCode::InvalidArgument);
  CHECK(bad([](TraceConfig& c) { c.dark_clearance_db = 0; }) == ErrorCode::InvalidArgument);
  CHECK(bad([](TraceConfig& c) { c.shot_averages = 0; }) == ErrorCode::InvalidArgument);
  CHECK(bad([](TraceConfig& c) { c.state.pump_ratio = 1.2; }) == ErrorCode::AboveThreshold);
}
