#pragma once

// Tagged measurement tables and their CSV form.
//
//   gain         pump_mw,g_plus,g_minus[,g_plus_err,g_minus_err]
//   squeeze      pump_mw,rel_noise_db_min,rel_noise_db_max[,err_db]
//   fp_response  quantity,value[,err]     quantity in {t_on,t_off,r_on,r_off}
//
// A header row is required. Lines starting with '#' and blank lines are
// ignored.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sqz {

enum class DataKind { Gain, Squeeze, FpResponse };

const char* to_string(DataKind kind);
DataKind data_kind_from_string(std::string_view s);

struct GainRow {
  double pump_mw = 0;
  double g_plus = 1;
  double g_minus = 1;
  std::optional<double> g_plus_err;
  std::optional<double> g_minus_err;
};

struct SqueezeRow {
  double pump_mw = 0;
  double sqz_db = 0;      // rel_noise_db_min, negative when squeezed
  double antisqz_db = 0;  // rel_noise_db_max
  std::optional<double> err_db;
};

enum class FpQuantity { TransOn, TransOff, ReflOn, ReflOff };

const char* to_string(FpQuantity q);

struct FpRow {
  FpQuantity quantity = FpQuantity::TransOn;
  double value = 0;
  std::optional<double> err;
};

struct DataSet {
  DataKind kind = DataKind::Gain;
  std::vector<GainRow> gain;
  std::vector<SqueezeRow> squeeze;
  std::vector<FpRow> fp;

  std::size_t rows() const;
  // Row-level invariants; `min_rows` is checked separately by each fitter.
  void validate() const;
};

DataSet parse_csv(std::string_view text, DataKind kind, std::string_view source = "<memory>");
DataSet load_csv(const std::string& path, DataKind kind);
std::string to_csv(const DataSet& data);

}  // namespace sqz
