#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "ssr/errors.hpp"

namespace ssr {

// Small dense Levenberg-Marquardt solver for the handful-of-parameter fits
// in this project (<= 4 parameters). Residuals are expected pre-weighted
// (r_k = (model_k - data_k) / sigma_k); the Jacobian is formed by forward
// differences. Normal equations are solved by Cholesky factorization.

struct LevMarOptions {
  int max_iterations = 200;
  double relative_step_tol = 1e-10;
  double lambda_init = 1e-3;
  double lambda_up = 10.0;
  double lambda_down = 0.1;
  double fd_step = 1e-6;  // relative finite-difference step
};

struct LevMarResult {
  std::vector<double> params;
  std::vector<double> covariance;  // row-major p x p, (J^T J)^-1 at optimum
  double chi2 = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> chi2_history;  // chi2 after each accepted step
};

namespace detail {

// Cholesky solve of A x = b for symmetric positive definite A (row-major).
// Returns false if the factorization breaks down.
inline bool cholesky_solve(std::vector<double> a, std::vector<double> b, std::size_t n,
                           std::vector<double>& x) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
      if (i == j) {
        if (!(s > 0.0)) return false;
        a[i * n + i] = std::sqrt(s);
      } else {
        a[i * n + j] = s / a[j * n + j];
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= a[i * n + k] * b[k];
    b[i] = s / a[i * n + i];
  }
  x.assign(n, 0.0);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= a[k * n + ii] * x[k];
    x[ii] = s / a[ii * n + ii];
  }
  return true;
}

inline bool invert_spd(const std::vector<double>& a, std::size_t n, std::vector<double>& inv) {
  inv.assign(n * n, 0.0);
  std::vector<double> e(n, 0.0), col;
  for (std::size_t j = 0; j < n; ++j) {
    e.assign(n, 0.0);
    e[j] = 1.0;
    if (!cholesky_solve(a, e, n, col)) return false;
    for (std::size_t i = 0; i < n; ++i) inv[i * n + j] = col[i];
  }
  return true;
}

}  // namespace detail

// model: fills residuals(params); throws are propagated.
inline LevMarResult levmar_fit(
    const std::function<void(const std::vector<double>&, std::vector<double>&)>& model,
    std::vector<double> params, std::size_t n_residuals, const LevMarOptions& opt = {}) {
  const std::size_t np = params.size();
  LevMarResult res;
  std::vector<double> r(n_residuals), r_trial(n_residuals), rp(n_residuals);
  std::vector<double> jac(n_residuals * np);
  std::vector<double> jtj(np * np), jtr(np), step, trial(np);

  auto chi2_of = [&](const std::vector<double>& rr) {
    double c = 0.0;
    for (double v : rr) c += v * v;
    return c;
  };

  model(params, r);
  double chi2 = chi2_of(r);
  res.chi2_history.push_back(chi2);
  double lambda = opt.lambda_init;

  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    res.iterations = iter + 1;
    // Forward-difference Jacobian.
    for (std::size_t j = 0; j < np; ++j) {
      const double h = opt.fd_step * std::max(std::abs(params[j]), 1e-8);
      std::vector<double> pp = params;
      pp[j] += h;
      model(pp, rp);
      for (std::size_t k = 0; k < n_residuals; ++k) jac[k * np + j] = (rp[k] - r[k]) / h;
    }
    for (std::size_t a = 0; a < np; ++a) {
      jtr[a] = 0.0;
      for (std::size_t b = 0; b <= a; ++b) {
        double s = 0.0;
        for (std::size_t k = 0; k < n_residuals; ++k) s += jac[k * np + a] * jac[k * np + b];
        jtj[a * np + b] = jtj[b * np + a] = s;
      }
      for (std::size_t k = 0; k < n_residuals; ++k) jtr[a] += jac[k * np + a] * r[k];
    }

    bool accepted = false;
    for (int attempt = 0; attempt < 30; ++attempt) {
      std::vector<double> damped = jtj;
      for (std::size_t a = 0; a < np; ++a)
        damped[a * np + a] += lambda * std::max(jtj[a * np + a], 1e-300);
      std::vector<double> neg = jtr;
      for (double& v : neg) v = -v;
      if (!detail::cholesky_solve(damped, neg, np, step)) {
        lambda *= opt.lambda_up;
        continue;
      }
      for (std::size_t a = 0; a < np; ++a) trial[a] = params[a] + step[a];
      model(trial, r_trial);
      const double chi2_trial = chi2_of(r_trial);
      if (chi2_trial <= chi2) {
        double rel = 0.0;
        for (std::size_t a = 0; a < np; ++a)
          rel = std::max(rel, std::abs(step[a]) / std::max(std::abs(params[a]), 1e-12));
        const double improvement = chi2 - chi2_trial;
        params = trial;
        r = r_trial;
        chi2 = chi2_trial;
        res.chi2_history.push_back(chi2);
        lambda = std::max(lambda * opt.lambda_down, 1e-12);
        accepted = true;
        if (rel < opt.relative_step_tol || improvement <= 1e-15 * (1.0 + chi2))
          res.converged = true;
        break;
      }
      lambda *= opt.lambda_up;
    }
    if (!accepted) {
      // Damping saturated: the current point is (numerically) the optimum.
      res.converged = true;
    }
    if (res.converged) break;
  }

  res.params = params;
  res.chi2 = chi2;
  detail::invert_spd(jtj, np, res.covariance);
  return res;
}

}  // namespace ssr
