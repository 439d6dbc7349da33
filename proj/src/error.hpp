#pragma once

#include <stdexcept>
#include <string>

namespace sqz {

// Mirrors sqz_status in the public C header; keep the values in sync.
enum class ErrorCode : int {
  InvalidArgument = 1,
  Domain = 2,
  AboveThreshold = 3,
  Parse = 4,
  Io = 5,
  NotConverged = 6,
  Infeasible = 7,
  Schema = 8,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, const std::string& what, ErrorCode code = ErrorCode::InvalidArgument) {
  if (!cond) fail(code, what);
}

}  // namespace sqz
