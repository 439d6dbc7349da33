#include "dataset.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "error.hpp"

namespace sqz {

namespace {

struct Field {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Field> split_fields(std::string_view line) {
  std::vector<Field> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    auto piece = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    std::size_t col = start + 1;
    while (!piece.empty() && (piece.front() == ' ' || piece.front() == '\t')) {
      piece.remove_prefix(1);
      ++col;
    }
    while (!piece.empty() && (piece.back() == ' ' || piece.back() == '\t')) piece.remove_suffix(1);
    out.push_back({piece, col});
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string where(std::string_view source, std::size_t line, std::size_t col) {
  std::ostringstream os;
  os << source << ':' << line << ':' << col << ": ";
  return os.str();
}

double parse_number(const Field& f, std::string_view source, std::size_t line) {
  double v = 0;
  const auto* first = f.text.data();
  const auto* last = first + f.text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (f.text.empty() || ec != std::errc() || ptr != last)
    fail(ErrorCode::Parse, where(source, line, f.column) + "expected a number, got '" + std::string(f.text) + "'");
  return v;
}

std::vector<std::string> expected_columns(DataKind kind) {
  switch (kind) {
    case DataKind::Gain:
      return {"pump_mw", "g_plus", "g_minus", "g_plus_err", "g_minus_err"};
    case DataKind::Squeeze:
      return {"pump_mw", "rel_noise_db_min", "rel_noise_db_max", "err_db"};
    case DataKind::FpResponse:
      return {"quantity", "value", "err"};
  }
  return {};
}

std::size_t required_columns(DataKind kind) { return kind == DataKind::FpResponse ? 2 : 3; }

FpQuantity parse_quantity(const Field& f, std::string_view source, std::size_t line) {
  if (f.text == "t_on") return FpQuantity::TransOn;
  if (f.text == "t_off") return FpQuantity::TransOff;
  if (f.text == "r_on") return FpQuantity::ReflOn;
  if (f.text == "r_off") return FpQuantity::ReflOff;
  fail(ErrorCode::Parse, where(source, line, f.column) + "unknown quantity '" + std::string(f.text) +
                             "' (expected t_on, t_off, r_on or r_off)");
}

void put(std::ostream& os, double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  os.write(buf, ptr - buf);
}

}  // namespace

const char* to_string(DataKind kind) {
  switch (kind) {
    case DataKind::Gain:
      return "gain";
    case DataKind::Squeeze:
      return "squeeze";
    case DataKind::FpResponse:
      return "fp_response";
  }
  return "?";
}

DataKind data_kind_from_string(std::string_view s) {
  if (s == "gain") return DataKind::Gain;
  if (s == "squeeze") return DataKind::Squeeze;
  if (s == "fp_response") return DataKind::FpResponse;
  fail(ErrorCode::InvalidArgument, "unknown data kind '" + std::string(s) + "'");
}

const char* to_string(FpQuantity q) {
  switch (q) {
    case FpQuantity::TransOn:
      return "t_on";
    case FpQuantity::TransOff:
      return "t_off";
    case FpQuantity::ReflOn:
      return "r_on";
    case FpQuantity::ReflOff:
      return "r_off";
  }
  return "?";
}

std::size_t DataSet::rows() const {
  switch (kind) {
    case DataKind::Gain:
      return gain.size();
    case DataKind::Squeeze:
      return squeeze.size();
    case DataKind::FpResponse:
      return fp.size();
  }
  return 0;
}

void DataSet::validate() const {
  for (std::size_t i = 0; i < gain.size(); ++i) {
    const auto& r = gain[i];
    const auto at = "gain row " + std::to_string(i + 1) + ": ";
    require(r.pump_mw >= 0, at + "pump power must be >= 0");
    require(r.g_minus > 0, at + "g_minus must be > 0");
    require(r.g_plus >= r.g_minus, at + "g_plus must be >= g_minus");
    require(!r.g_plus_err || *r.g_plus_err > 0, at + "g_plus_err must be > 0");
    require(!r.g_minus_err || *r.g_minus_err > 0, at + "g_minus_err must be > 0");
  }
  for (std::size_t i = 0; i < squeeze.size(); ++i) {
    const auto& r = squeeze[i];
    const auto at = "squeeze row " + std::to_string(i + 1) + ": ";
    require(r.pump_mw >= 0, at + "pump power must be >= 0");
    require(r.sqz_db <= r.antisqz_db, at + "rel_noise_db_min must not exceed rel_noise_db_max");
    require(!r.err_db || *r.err_db > 0, at + "err_db must be > 0");
  }
  for (std::size_t i = 0; i < fp.size(); ++i) {
    const auto& r = fp[i];
    const auto at = "fp_response row " + std::to_string(i + 1) + ": ";
    require(r.value >= 0 && r.value <= 1, at + "value must be a power fraction in [0, 1]");
    require(!r.err || *r.err > 0, at + "err must be > 0");
  }
}

DataSet parse_csv(std::string_view text, DataKind kind, std::string_view source) {
  DataSet data;
  data.kind = kind;
  const auto columns = expected_columns(kind);
  std::size_t ncols = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos || line.front() == '#') continue;

    const auto fields = split_fields(line);
    if (ncols == 0) {
      require(fields.size() >= required_columns(kind) && fields.size() <= columns.size(),
              where(source, line_no, 1) + "header for " + to_string(kind) + " data must have between " +
                  std::to_string(required_columns(kind)) + " and " + std::to_string(columns.size()) + " columns",
              ErrorCode::Parse);
      for (std::size_t i = 0; i < fields.size(); ++i)
        require(fields[i].text == columns[i],
                where(source, line_no, fields[i].column) + "expected column '" + columns[i] + "', got '" +
                    std::string(fields[i].text) + "'",
                ErrorCode::Parse);
      ncols = fields.size();
      continue;
    }
    require(fields.size() == ncols,
            where(source, line_no, 1) + "expected " + std::to_string(ncols) + " fields, got " +
                std::to_string(fields.size()),
            ErrorCode::Parse);

    auto num = [&](std::size_t i) { return parse_number(fields[i], source, line_no); };
    switch (kind) {
      case DataKind::Gain: {
        GainRow r{num(0), num(1), num(2), std::nullopt, std::nullopt};
        if (ncols > 3) r.g_plus_err = num(3);
        if (ncols > 4) r.g_minus_err = num(4);
        data.gain.push_back(r);
        break;
      }
      case DataKind::Squeeze: {
        SqueezeRow r{num(0), num(1), num(2), std::nullopt};
        if (ncols > 3) r.err_db = num(3);
        data.squeeze.push_back(r);
        break;
      }
      case DataKind::FpResponse: {
        FpRow r{parse_quantity(fields[0], source, line_no), num(1), std::nullopt};
        if (ncols > 2) r.err = num(2);
        data.fp.push_back(r);
        break;
      }
    }
  }
  require(ncols > 0, std::string(source) + ": missing header row", ErrorCode::Parse);
  data.validate();
  return data;
}

DataSet load_csv(const std::string& path, DataKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str(), kind, path);
}

std::string to_csv(const DataSet& data) {
  std::ostringstream os;
  const auto columns = expected_columns(data.kind);
  std::size_t ncols = required_columns(data.kind);
  switch (data.kind) {
    case DataKind::Gain:
      for (const auto& r : data.gain) {
        if (r.g_plus_err || r.g_minus_err) ncols = 5;
      }
      break;
    case DataKind::Squeeze:
      for (const auto& r : data.squeeze)
        if (r.err_db) ncols = 4;
      break;
    case DataKind::FpResponse:
      for (const auto& r : data.fp)
        if (r.err) ncols = 3;
      break;
  }
  for (std::size_t i = 0; i < ncols; ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  auto opt = [&](const std::optional<double>& v) {
    os << ',';
    put(os, v.value_or(0.0));
  };
  switch (data.kind) {
    case DataKind::Gain:
      for (const auto& r : data.gain) {
        put(os, r.pump_mw), os << ',', put(os, r.g_plus), os << ',', put(os, r.g_minus);
        if (ncols == 5) opt(r.g_plus_err), opt(r.g_minus_err);
        os << '\n';
      }
      break;
    case DataKind::Squeeze:
      for (const auto& r : data.squeeze) {
        put(os, r.pump_mw), os << ',', put(os, r.sqz_db), os << ',', put(os, r.antisqz_db);
        if (ncols == 4) opt(r.err_db);
        os << '\n';
      }
      break;
    case DataKind::FpResponse:
      for (const auto& r : data.fp) {
        os << to_string(r.quantity) << ',';
        put(os, r.value);
        if (ncols == 3) opt(r.err);
        os << '\n';
      }
      break;
  }
  return os.str();
}

}  // namespace sqz
