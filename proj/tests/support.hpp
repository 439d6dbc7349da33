#pragma once

#include <cmath>
#include <random>

#include "error.hpp"

namespace testing {

inline bool near_rel(double a, double b, double tol) { return std::fabs(a - b) <= tol * std::fabs(b); }

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20241014);
  return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

template <class F>
sqz::ErrorCode error_code_of(F&& f) {
  try {
    f();
  } catch (const sqz::Error& e) {
    return e.code();
  }
  return sqz::ErrorCode{0};
}

}  // namespace testing
