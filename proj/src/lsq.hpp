#pragma once

// Nonlinear least squares: damped Gauss-Newton (Levenberg-Marquardt) with a
// Nelder-Mead fallback when the damped iteration stalls, multi-start from
// deterministic perturbations, and central-difference Jacobians.
//
// Bounded parameters are optimized in an unconstrained internal coordinate:
//   Positive    x = exp(u)
//   Lower(lo)   x = lo - 1 + sqrt(u^2 + 1)      (can reach lo exactly)
//   Interval    x = lo + (hi - lo) / (1 + exp(-u))   (open interval)
// Standard errors are computed in the external coordinates.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace sqz {

enum class BoundKind { Free, Positive, Lower, Interval };

struct ParamSpec {
  std::string name;
  double init = 0;
  BoundKind bound = BoundKind::Free;
  double lo = 0;
  double hi = 0;
};

struct LsqOptions {
  double grad_tol = 1e-12;
  double step_tol = 1e-10;
  int max_iter = 500;  // per start
  int starts = 8;
  std::uint64_t seed = 0x5eed;
  double start_spread = 1.0;  // std of start perturbation in internal units
  int simplex_evals = 400;
};

struct FitResult {
  std::vector<std::string> names;
  std::vector<double> params;
  std::vector<double> stderr_;
  std::vector<double> residuals;
  double rss = 0;
  double grad_norm = 0;
  bool converged = false;
  int iterations = 0;  // LM iterations of the selected start
  int starts_run = 0;
  int starts_converged = 0;
  std::string diagnostic;
  std::vector<double> rss_history;  // rss after every accepted step of the selected start

  double param(const std::string& name) const;
  double stderr_of(const std::string& name) const;
};

// Maps external parameters to residuals. May throw sqz::Error for points
// outside the model domain; such trial points are rejected.
using ResidualFn = std::function<std::vector<double>(std::span<const double>)>;

double to_external(const ParamSpec& p, double u);
double to_internal(const ParamSpec& p, double x);

FitResult least_squares(const ResidualFn& model, std::span<const ParamSpec> params, const LsqOptions& opts = {});

}  // namespace sqz
