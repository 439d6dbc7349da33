#include <doctest.h>

#include <string>

#include "dataset.hpp"
#include "support.hpp"

using namespace sqz;
using testing::error_code_of;

namespace {
std::string parse_error(std::string_view text, DataKind kind) {
  try {
    parse_csv(text, kind, "in.csv");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Parse);
    return e.what();
  }
  return "";
}
}  // namespace

TEST_CASE("gain csv with comments, blank lines and CRLF") {
  const auto d = parse_csv("# seeded gain\n\npump_mw,g_plus,g_minus\r\n5,1.5,0.7\r\n10,2.0,0.6\n", DataKind::Gain);
  REQUIRE(d.rows() == 2);
  CHECK(d.gain[1].pump_mw == 10);
  CHECK(d.gain[1].g_minus == doctest::Approx(0.6));
  CHECK_FALSE(d.gain[0].g_plus_err.has_value());
}

TEST_CASE("optional error columns") {
  const auto d = parse_csv("pump_mw,rel_noise_db_min,rel_noise_db_max,err_db\n20,-2.9,6.0,0.05\n", DataKind::Squeeze);
  REQUIRE(d.squeeze.size() == 1);
  CHECK(*d.squeeze[0].err_db == doctest::Approx(0.05));
  const auto fp = parse_csv("quantity,value\nt_on,0.1\nr_off,0.99\n", DataKind::FpResponse);
  CHECK(fp.fp[1].quantity == FpQuantity::ReflOff);
}

TEST_CASE("malformed csv reports line and column") {
  CHECK(parse_error("pump_mw,g_plus,g_minus\n5,1.5,abc\n", DataKind::Gain).find("in.csv:2:") == 0);
  CHECK(parse_error("pump_mw,g_plus,g_minus\n5,1.5,abc\n", DataKind::Gain).find(":2:7:") != std::string::npos);
  CHECK(parse_error("pump_mw,gplus,g_minus\n", DataKind::Gain).find("expected column 'g_plus'") != std::string::npos);
  CHECK(parse_error("pump_mw,g_plus,g_minus\n5,1.5\n", DataKind::Gain).find("expected 3 fields") != std::string::npos);
  CHECK(parse_error("quantity,value\nt_mid,0.3\n", DataKind::FpResponse).find("unknown quantity") !=
        std::string::npos);
  CHECK(parse_error("pump_mw,g_plus\n", DataKind::Gain).find("header") != std::string::npos);
}

TEST_CASE("row invariants") {
  auto invalid = [](std::string_view text, DataKind kind) {
    return error_code_of([&] { parse_csv(text, kind).validate(); });
  };
  CHECK(invalid("pump_mw,g_plus,g_minus\n-1,1.5,0.7\n", DataKind::Gain) == ErrorCode::InvalidArgument);
  CHECK(invalid("pump_mw,g_plus,g_minus\n5,0.5,0.7\n", DataKind::Gain) == ErrorCode::InvalidArgument);
  CHECK(invalid("pump_mw,rel_noise_db_min,rel_noise_db_max\n5,3,1\n", DataKind::Squeeze) ==
        ErrorCode::InvalidArgument);
  CHECK(invalid("quantity,value\nt_on,1.2\n", DataKind::FpResponse) == ErrorCode::InvalidArgument);
}

TEST_CASE("csv round trip preserves every value exactly") {
  DataSet d;
  d.kind = DataKind::Squeeze;
  d.squeeze = {{1.0 / 3, -0.1234567890123, 0.987654321, 0.01}, {7.25, -2.9, 6.0, 0.02}};
  const auto back = parse_csv(to_csv(d), DataKind::Squeeze);
  REQUIRE(back.rows() == 2);
  CHECK(back.squeeze[0].pump_mw == d.squeeze[0].pump_mw);
  CHECK(back.squeeze[0].sqz_db == d.squeeze[0].sqz_db);
  CHECK(*back.squeeze[1].err_db == *d.squeeze[1].err_db);
  CHECK(to_csv(d).find('\r') == std::string::npos);
}

TEST_CASE("packaged gain data loads") {
  const auto d = load_csv(std::string(SQZ_DATA_DIR) + "/gain.csv", DataKind::Gain);
  CHECK(d.rows() == 12);
  CHECK(error_code_of([] { load_csv("/nonexistent/file.csv", DataKind::Gain); }) == ErrorCode::Io);
}
