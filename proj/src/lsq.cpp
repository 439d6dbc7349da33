#include "lsq.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include "error.hpp"

namespace sqz {

namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Problem {
  const ResidualFn& model;
  std::span<const ParamSpec> params;

  std::vector<double> external(const Vec& u) const {
    std::vector<double> x(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) x[i] = to_external(params[i], u[i]);
    return x;
  }

  std::optional<Vec> residuals_external(std::span<const double> x) const {
    std::vector<double> r;
    try {
      r = model(x);
    } catch (const Error&) {
      return std::nullopt;
    }
    Vec out(static_cast<Eigen::Index>(r.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (!std::isfinite(r[i])) return std::nullopt;
      out[static_cast<Eigen::Index>(i)] = r[i];
    }
    return out;
  }

  std::optional<Vec> residuals(const Vec& u) const {
    const auto x = external(u);
    return residuals_external(x);
  }

  // Central differences in internal coordinates, one-sided where the
  // model is undefined on one side.
  std::optional<Mat> jacobian(const Vec& u, const Vec& r0) const {
    const auto n = u.size();
    Mat jac(r0.size(), n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double h = 6e-6 * std::max(1.0, std::abs(u[j]));
      Vec up = u, dn = u;
      up[j] += h;
      dn[j] -= h;
      const auto rp = residuals(up);
      const auto rm = residuals(dn);
      if (rp && rm)
        jac.col(j) = (*rp - *rm) / (2 * h);
      else if (rp)
        jac.col(j) = (*rp - r0) / h;
      else if (rm)
        jac.col(j) = (r0 - *rm) / h;
      else
        return std::nullopt;
    }
    return jac;
  }
};

struct Run {
  Vec u;
  Vec r;
  double cost = kInf;
  double grad_norm = kInf;
  bool converged = false;
  bool stalled = false;
  int iterations = 0;
  std::vector<double> history;
  std::string diagnostic;
};

double relative_step(const Vec& step, const Vec& u, double tol) { return step.norm() / (u.norm() + tol); }

Run levenberg_marquardt(const Problem& prob, Vec u, const LsqOptions& opts, int max_iter) {
  Run run;
  auto r = prob.residuals(u);
  if (!r) {
    run.diagnostic = "model undefined at starting point";
    run.stalled = false;
    return run;
  }
  run.u = u;
  run.r = *r;
  run.cost = run.r.squaredNorm();
  run.history.push_back(run.cost);

  double lambda = -1;
  for (int it = 0; it < max_iter; ++it) {
    const auto jac = prob.jacobian(run.u, run.r);
    if (!jac) {
      run.diagnostic = "Jacobian undefined at current point";
      run.stalled = true;
      return run;
    }
    const Vec g = jac->transpose() * run.r;
    run.grad_norm = g.norm();
    if (run.grad_norm < opts.grad_tol) {
      run.converged = true;
      return run;
    }
    const Vec gn_step = jac->completeOrthogonalDecomposition().solve(-run.r);
    if (gn_step.allFinite() && relative_step(gn_step, run.u, opts.step_tol) < opts.step_tol) {
      run.converged = true;
      return run;
    }

    const Mat a = jac->transpose() * (*jac);
    const double max_diag = std::max(a.diagonal().maxCoeff(), 1e-300);
    Vec d = a.diagonal().cwiseMax(1e-12 * max_diag);
    if (lambda < 0) lambda = 1e-3;

    bool accepted = false;
    while (!accepted) {
      Mat damped = a;
      damped.diagonal() += lambda * d;
      const Vec step = damped.ldlt().solve(-g);
      if (step.allFinite()) {
        const Vec trial = run.u + step;
        const auto rt = prob.residuals(trial);
        if (rt) {
          const double cost = rt->squaredNorm();
          if (cost < run.cost) {
            const double rel = relative_step(step, run.u, opts.step_tol);
            run.u = trial;
            run.r = *rt;
            run.cost = cost;
            run.history.push_back(cost);
            ++run.iterations;
            lambda = std::max(lambda / 3.0, 1e-12);
            accepted = true;
            if (rel < opts.step_tol) {
              run.converged = true;
              return run;
            }
            continue;
          }
        }
      }
      lambda *= 4.0;
      if (lambda > 1e16) {
        run.stalled = true;
        run.diagnostic = "damping limit reached without reducing rss";
        return run;
      }
    }
  }
  run.diagnostic = "maximum iterations reached";
  run.stalled = true;
  return run;
}

// Downhill simplex on the sum of squares in internal coordinates.
Vec nelder_mead(const Problem& prob, const Vec& start, int max_evals) {
  const auto n = start.size();
  auto cost = [&](const Vec& u) {
    const auto r = prob.residuals(u);
    return r ? r->squaredNorm() : kInf;
  };
  std::vector<Vec> pts(static_cast<std::size_t>(n + 1), start);
  std::vector<double> f(static_cast<std::size_t>(n + 1));
  for (Eigen::Index i = 0; i < n; ++i) pts[static_cast<std::size_t>(i + 1)][i] += 0.5 * std::max(1.0, std::abs(start[i]));
  for (std::size_t i = 0; i < pts.size(); ++i) f[i] = cost(pts[i]);
  int evals = static_cast<int>(pts.size());

  std::vector<std::size_t> order(pts.size());
  while (evals < max_evals) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return f[a] < f[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];
    if (std::abs(f[worst] - f[best]) <= 1e-15 * (std::abs(f[best]) + 1e-300)) break;

    Vec centroid = Vec::Zero(n);
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (i != worst) centroid += pts[i];
    centroid /= static_cast<double>(n);

    const Vec reflected = centroid + (centroid - pts[worst]);
    const double fr = cost(reflected);
    ++evals;
    if (fr < f[best]) {
      const Vec expanded = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = cost(expanded);
      ++evals;
      if (fe < fr) {
        pts[worst] = expanded;
        f[worst] = fe;
      } else {
        pts[worst] = reflected;
        f[worst] = fr;
      }
    } else if (fr < f[second]) {
      pts[worst] = reflected;
      f[worst] = fr;
    } else {
      const Vec contracted = centroid + 0.5 * (pts[worst] - centroid);
      const double fc = cost(contracted);
      ++evals;
      if (fc < f[worst]) {
        pts[worst] = contracted;
        f[worst] = fc;
      } else {
        for (std::size_t i = 0; i < pts.size(); ++i) {
          if (i == best) continue;
          pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
          f[i] = cost(pts[i]);
          ++evals;
        }
      }
    }
  }
  const auto best = std::min_element(f.begin(), f.end()) - f.begin();
  return pts[static_cast<std::size_t>(best)];
}

Run run_one_start(const Problem& prob, const Vec& start, const LsqOptions& opts) {
  Run run = levenberg_marquardt(prob, start, opts, opts.max_iter);
  if (run.converged || !run.stalled) return run;

  const Vec polished = nelder_mead(prob, run.u, opts.simplex_evals);
  Run retry = levenberg_marquardt(prob, polished, opts, std::max(1, opts.max_iter - run.iterations));
  if (retry.cost > run.cost && !retry.converged) return run;
  std::vector<double> history = run.history;
  for (double c : retry.history)
    if (c <= history.back()) history.push_back(c);
  retry.history = std::move(history);
  retry.iterations += run.iterations;
  return retry;
}

struct Sensitivity {
  bool degenerate = false;
  std::string diagnostic;
};

Sensitivity check_sensitivity(const Mat& jac, std::span<const ParamSpec> params) {
  Sensitivity s;
  const auto n = jac.cols();
  Vec norms(n);
  for (Eigen::Index j = 0; j < n; ++j) norms[j] = jac.col(j).norm();
  const double max_norm = norms.maxCoeff();
  std::ostringstream os;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!(norms[j] > 1e-14 * max_norm) || max_norm == 0) {
      s.degenerate = true;
      os << "residuals are insensitive to parameter '" << params[static_cast<std::size_t>(j)].name << "'; ";
    }
  }
  if (!s.degenerate && n > 1) {
    Mat scaled = jac;
    for (Eigen::Index j = 0; j < n; ++j) scaled.col(j) /= norms[j];
    Eigen::JacobiSVD<Mat> svd(scaled, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv[n - 1] < 1e-7 * sv[0]) {
      s.degenerate = true;
      os << "parameters are not separately identifiable (sensitivity condition "
         << (sv[n - 1] > 0 ? sv[0] / sv[n - 1] : kInf) << "):";
      const Vec v = svd.matrixV().col(n - 1);
      for (Eigen::Index j = 0; j < n; ++j)
        if (std::abs(v[j]) > 0.1) os << " '" << params[static_cast<std::size_t>(j)].name << "'";
      os << "; ";
    }
  }
  s.diagnostic = os.str();
  return s;
}

}  // namespace

double to_external(const ParamSpec& p, double u) {
  switch (p.bound) {
    case BoundKind::Free:
      return u;
    case BoundKind::Positive:
      return std::exp(u);
    case BoundKind::Lower:
      return p.lo - 1.0 + std::sqrt(u * u + 1.0);
    case BoundKind::Interval:
      return p.lo + (p.hi - p.lo) / (1.0 + std::exp(-u));
  }
  return u;
}

double to_internal(const ParamSpec& p, double x) {
  switch (p.bound) {
    case BoundKind::Free:
      return x;
    case BoundKind::Positive:
      require(x > 0, "initial value of '" + p.name + "' must be > 0");
      return std::log(x);
    case BoundKind::Lower: {
      const double shifted = std::max(x - p.lo, 0.0) + 1.0;
      return std::sqrt(shifted * shifted - 1.0);
    }
    case BoundKind::Interval: {
      require(p.hi > p.lo, "interval bound of '" + p.name + "' is empty");
      const double span = p.hi - p.lo;
      const double t = std::clamp((x - p.lo) / span, 1e-12, 1.0 - 1e-12);
      return std::log(t / (1.0 - t));
    }
  }
  return x;
}

double FitResult::param(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  require(it != names.end(), "no fitted parameter named '" + name + "'");
  return params[static_cast<std::size_t>(it - names.begin())];
}

double FitResult::stderr_of(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  require(it != names.end(), "no fitted parameter named '" + name + "'");
  return stderr_[static_cast<std::size_t>(it - names.begin())];
}

FitResult least_squares(const ResidualFn& model, std::span<const ParamSpec> params, const LsqOptions& opts) {
  require(!params.empty(), "least_squares needs at least one parameter");
  require(opts.starts >= 1 && opts.max_iter >= 1, "least_squares needs starts >= 1 and max_iter >= 1");
  const Problem prob{model, params};
  const auto n = static_cast<Eigen::Index>(params.size());

  Vec init(n);
  for (Eigen::Index i = 0; i < n; ++i) init[i] = to_internal(params[static_cast<std::size_t>(i)], params[static_cast<std::size_t>(i)].init);
  if (!prob.residuals(init)) fail(ErrorCode::Domain, "model is not defined at the initial parameters");

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  FitResult result;
  Run best;
  bool have_best = false;
  for (int k = 0; k < opts.starts; ++k) {
    Vec start = init;
    if (k > 0)
      for (Eigen::Index i = 0; i < n; ++i) start[i] += opts.start_spread * normal(rng);
    if (!prob.residuals(start)) continue;
    Run run = run_one_start(prob, start, opts);
    ++result.starts_run;
    if (run.converged) ++result.starts_converged;
    if (run.u.size() == 0) continue;
    const bool better = !have_best || (run.converged && !best.converged) ||
                        (run.converged == best.converged && run.cost < best.cost);
    if (better) {
      best = std::move(run);
      have_best = true;
    }
  }
  if (!have_best) fail(ErrorCode::Domain, "model could not be evaluated at any starting point");

  for (const auto& p : params) result.names.push_back(p.name);
  result.params = prob.external(best.u);
  result.residuals.assign(best.r.data(), best.r.data() + best.r.size());
  result.rss = best.cost;
  result.grad_norm = best.grad_norm;
  result.converged = best.converged;
  result.iterations = best.iterations;
  result.rss_history = best.history;
  result.diagnostic = best.converged ? "" : best.diagnostic;

  // Standard errors from the Jacobian in external coordinates.
  const auto m = best.r.size();
  Mat jac(m, n);
  bool jac_ok = true;
  for (Eigen::Index j = 0; j < n && jac_ok; ++j) {
    const auto& p = params[static_cast<std::size_t>(j)];
    const double x = result.params[static_cast<std::size_t>(j)];
    const double h = 1e-6 * std::max(std::abs(x), 1e-3);
    auto xp = result.params, xm = result.params;
    xp[static_cast<std::size_t>(j)] = x + h;
    xm[static_cast<std::size_t>(j)] = x - h;
    const bool down_ok = !(p.bound == BoundKind::Positive && x - h <= 0) &&
                         !((p.bound == BoundKind::Lower || p.bound == BoundKind::Interval) && x - h < p.lo);
    const bool up_ok = !(p.bound == BoundKind::Interval && x + h > p.hi);
    const auto rp = up_ok ? prob.residuals_external(xp) : std::nullopt;
    const auto rm = down_ok ? prob.residuals_external(xm) : std::nullopt;
    if (rp && rm)
      jac.col(j) = (*rp - *rm) / (2 * h);
    else if (rp)
      jac.col(j) = (*rp - best.r) / h;
    else if (rm)
      jac.col(j) = (best.r - *rm) / h;
    else
      jac_ok = false;
  }

  result.stderr_.assign(static_cast<std::size_t>(n), kInf);
  if (jac_ok) {
    const auto sens = check_sensitivity(jac, params);
    if (sens.degenerate) {
      result.converged = false;
      result.diagnostic = sens.diagnostic + result.diagnostic;
    } else {
      const double dof = static_cast<double>(std::max<Eigen::Index>(1, m - n));
      const Mat cov = (jac.transpose() * jac).inverse() * (best.cost / dof);
      for (Eigen::Index j = 0; j < n; ++j) result.stderr_[static_cast<std::size_t>(j)] = std::sqrt(std::max(0.0, cov(j, j)));
    }
  } else {
    result.diagnostic += "standard errors unavailable (model undefined around the solution); ";
  }
  if (!result.converged && result.diagnostic.empty()) result.diagnostic = "did not converge";
  return result;
}

}  // namespace sqz
