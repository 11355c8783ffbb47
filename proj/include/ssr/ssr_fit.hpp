#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "ssr/energy_grid.hpp"
#include "ssr/errors.hpp"
#include "ssr/levmar.hpp"
#include "ssr/physics.hpp"
#include "ssr/spin_dynamics.hpp"

namespace ssr {

struct SsrFitResult {
  RateSet rates;                   // fitted Delta0, omega_ex, gamma_c (mean_shift untouched)
  std::vector<double> covariance;  // 3x3 row-major, scaled by chi2/(n-3)
  double chi2 = 0.0;
  int iterations = 0;
  bool converged = false;
  bool weakly_identifiable = false;  // no revival in the data
  std::vector<double> chi2_history;
};

// Model contrast at the sample times for a rate triple. The homogeneous
// shift only rotates the mean spin and drops out of |S_perp|, so it is set
// to zero here.
inline std::vector<double> model_contrast(const std::vector<double>& times, double delta0,
                                          double omega_ex, double gamma_c,
                                          const EnergyClassGrid& grid) {
  RateSet r{std::abs(delta0), std::abs(omega_ex), std::abs(gamma_c), 0.0};
  RamseyConfig cfg;
  cfg.rates = r;
  RamseyRecord rec = ramsey_scan(cfg, times, grid);
  return rec.contrast;
}

// Initial guesses from the data shape: Delta0 from the early decay of the
// bare envelope (1 + (Delta0 t)^2)^(-3/2), omega_ex from the first revival
// time (t_rev ~ 2 pi / omega_ex), gamma_c from the revival damping.
inline void ssr_fit_heuristic(const std::vector<double>& times, const std::vector<double>& c,
                              double& delta0, double& omega_ex, double& gamma_c,
                              bool& revival_found) {
  delta0 = 1.0;
  omega_ex = 10.0;
  gamma_c = 0.5;
  revival_found = false;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] < 0.75 && times[k] > 0.0) {
      delta0 = 0.45993 / times[k];  // (0.75^(-2/3) - 1)^(1/2)
      break;
    }
  }
  std::size_t imin = 0;
  for (std::size_t k = 1; k + 1 < c.size(); ++k) {
    if (imin == 0 && c[k] < c[k - 1] && c[k] <= c[k + 1]) imin = k;
    if (imin > 0 && k > imin && c[k] > c[k - 1] && c[k] >= c[k + 1]) {
      revival_found = true;
      if (times[k] > 0.0) {
        omega_ex = constants::two_pi / times[k];
        if (c[k] > 0.0 && c[k] < 1.0) gamma_c = std::max(-std::log(c[k]) / times[k], 1e-3);
      }
      break;
    }
  }
}

// Least-squares fit of the contrast envelope over (Delta0, omega_ex,
// gamma_c). Pass initial.delta0 <= 0 to use the heuristic initialization.
inline SsrFitResult fit_ssr_model(const std::vector<double>& times,
                                  const std::vector<double>& contrast,
                                  const EnergyClassGrid& grid, RateSet initial = {},
                                  double sigma = 0.0) {
  if (times.size() != contrast.size())
    throw input_error("fit_ssr_model: times/contrast size mismatch");
  if (times.size() < 20) throw input_error("fit_ssr_model: need at least 20 points");

  double d0 = initial.delta0, wx = initial.omega_ex, gc = initial.gamma_c;
  bool revival = true;
  if (!(d0 > 0.0)) {
    ssr_fit_heuristic(times, contrast, d0, wx, gc, revival);
  } else {
    bool dummy_d = false;
    double a, b, c;
    ssr_fit_heuristic(times, contrast, a, b, c, dummy_d);
    revival = dummy_d;
  }

  const double weight = sigma > 0.0 ? 1.0 / sigma : 1.0;
  auto model = [&](const std::vector<double>& p, std::vector<double>& r) {
    const std::vector<double> m = model_contrast(times, p[0], p[1], p[2], grid);
    for (std::size_t k = 0; k < m.size(); ++k) r[k] = (m[k] - contrast[k]) * weight;
  };

  LevMarOptions opt;
  opt.fd_step = 1e-5;
  LevMarResult lm = levmar_fit(model, {d0, wx, gc}, times.size(), opt);
  if (!lm.converged) throw convergence_error("fit_ssr_model: did not converge");

  SsrFitResult out;
  out.rates = initial;
  out.rates.delta0 = std::abs(lm.params[0]);
  out.rates.omega_ex = std::abs(lm.params[1]);
  out.rates.gamma_c = std::abs(lm.params[2]);
  out.chi2 = lm.chi2;
  out.iterations = lm.iterations;
  out.converged = lm.converged;
  out.weakly_identifiable = !revival;
  out.chi2_history = lm.chi2_history;
  // Parameter covariance from the Gauss-Newton Jacobian at the optimum,
  // scaled by the reduced chi2 when per-point sigma was not supplied.
  out.covariance = lm.covariance;
  const double dof = static_cast<double>(times.size()) - 3.0;
  const double scale = sigma > 0.0 ? 1.0 : (dof > 0.0 ? lm.chi2 / dof : 1.0);
  for (double& v : out.covariance) v *= scale;
  return out;
}

}  // namespace ssr
