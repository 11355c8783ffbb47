#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "ssr/constants.hpp"
#include "ssr/errors.hpp"
#include "ssr/levmar.hpp"

namespace ssr {

// Parameters of P(t) = offset + (C/2) cos(2 pi f t + phi).
struct FringeFit {
  double frequency = 0.0;  // Hz
  double phase = 0.0;      // rad
  double contrast = 0.0;
  double offset = 0.0;
  double residual_rms = 0.0;
};

namespace detail {

// Linear subproblem at fixed frequency: P = offset + a cos + b sin.
// Returns chi2; outputs the three linear coefficients.
inline double fringe_linear_solve(const std::vector<double>& t, const std::vector<double>& p,
                                  const std::vector<double>& w, double freq, double& offset,
                                  double& a, double& b) {
  double s[3][3] = {{0}}, rhs[3] = {0};
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double c = std::cos(constants::two_pi * freq * t[k]);
    const double sn = std::sin(constants::two_pi * freq * t[k]);
    const double basis[3] = {1.0, c, sn};
    for (int i = 0; i < 3; ++i) {
      rhs[i] += w[k] * basis[i] * p[k];
      for (int j = 0; j < 3; ++j) s[i][j] += w[k] * basis[i] * basis[j];
    }
  }
  // 3x3 Gaussian elimination with partial pivoting.
  double m[3][4];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m[i][j] = s[i][j];
    m[i][3] = rhs[i];
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    std::swap(m[col], m[piv]);
    if (std::abs(m[col][col]) < 1e-300) return std::numeric_limits<double>::infinity();
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      for (int j = col; j < 4; ++j) m[r][j] -= f * m[col][j];
    }
  }
  offset = m[0][3] / m[0][0];
  a = m[1][3] / m[1][1];
  b = m[2][3] / m[2][2];
  double chi2 = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double model = offset + a * std::cos(constants::two_pi * freq * t[k]) +
                         b * std::sin(constants::two_pi * freq * t[k]);
    chi2 += w[k] * (p[k] - model) * (p[k] - model);
  }
  return chi2;
}

}  // namespace detail

// Weighted least-squares fringe fit: coarse frequency grid with per-frequency
// linear solves, then Levenberg-Marquardt refinement of all four parameters.
// sigmas may be empty (unit weights). window: [t_min, t_max]; pass an empty
// range (t_min >= t_max) to use all points.
inline FringeFit fit_fringe(const std::vector<double>& times, const std::vector<double>& values,
                            const std::vector<double>& sigmas = {}, double t_min = 0.0,
                            double t_max = -1.0) {
  if (times.size() != values.size()) throw input_error("fit_fringe: times/values size mismatch");
  std::vector<double> t, p, w;
  const bool windowed = t_max > t_min;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (windowed && (times[k] < t_min || times[k] > t_max)) continue;
    t.push_back(times[k]);
    p.push_back(values[k]);
    const double s = sigmas.empty() ? 1.0 : sigmas[k];
    if (!(s > 0.0)) throw input_error("fit_fringe: sigma must be > 0");
    w.push_back(1.0 / (s * s));
  }
  if (t.size() < 6) throw input_error("fit_fringe: need at least 6 points in window");
  const double span = t.back() - t.front();
  if (!(span > 0.0)) throw input_error("fit_fringe: degenerate time window");

  // Coarse grid between a quarter cycle over the span and Nyquist of the
  // median sampling interval.
  std::vector<double> dts;
  for (std::size_t k = 1; k < t.size(); ++k) dts.push_back(t[k] - t[k - 1]);
  std::nth_element(dts.begin(), dts.begin() + dts.size() / 2, dts.end());
  const double dt_med = std::max(dts[dts.size() / 2], 1e-12);
  const double f_lo = 0.25 / span;
  const double f_hi = 0.5 / dt_med;
  double best_chi2 = std::numeric_limits<double>::infinity();
  double best_f = f_lo, off = 0.0, ca = 0.0, cb = 0.0;
  const int n_grid = 800;
  for (int i = 0; i <= n_grid; ++i) {
    const double f = f_lo + (f_hi - f_lo) * static_cast<double>(i) / n_grid;
    double o, a, b;
    const double chi2 = detail::fringe_linear_solve(t, p, w, f, o, a, b);
    if (chi2 < best_chi2) {
      best_chi2 = chi2;
      best_f = f;
      off = o;
      ca = a;
      cb = b;
    }
  }

  // Refine (f, a, b, offset).
  auto model = [&](const std::vector<double>& prm, std::vector<double>& r) {
    for (std::size_t k = 0; k < t.size(); ++k) {
      const double arg = constants::two_pi * prm[0] * t[k];
      const double m = prm[3] + prm[1] * std::cos(arg) + prm[2] * std::sin(arg);
      r[k] = (m - p[k]) * std::sqrt(w[k]);
    }
  };
  LevMarResult lm = levmar_fit(model, {best_f, ca, cb, off}, t.size());
  if (!lm.converged) throw convergence_error("fit_fringe: refinement did not converge");

  FringeFit fit;
  fit.frequency = std::abs(lm.params[0]);
  const double a = lm.params[1], b = lm.params[2];
  fit.contrast = 2.0 * std::hypot(a, b);
  fit.phase = std::atan2(-b, a);
  fit.offset = lm.params[3];
  fit.residual_rms = std::sqrt(lm.chi2 / static_cast<double>(t.size()));
  if (span * fit.frequency < 1.0)
    throw input_error("fit_fringe: window shorter than one fitted period");
  return fit;
}

// Contrast envelope of a measured P(t) series: sliding-window fringe fits at
// fixed frequency (window = window_periods fringe cycles). Returns center
// times and local contrasts.
inline void contrast_envelope(const std::vector<double>& times, const std::vector<double>& values,
                              double fringe_frequency, std::vector<double>& centers,
                              std::vector<double>& contrasts, double window_periods = 3.0) {
  if (!(fringe_frequency > 0.0))
    throw input_error("contrast_envelope: fringe frequency must be > 0");
  const double win = window_periods / fringe_frequency;
  centers.clear();
  contrasts.clear();
  std::size_t lo = 0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double c0 = times[k];
    std::vector<double> t, p, w;
    for (std::size_t j = lo; j < times.size(); ++j) {
      if (times[j] < c0 - win / 2) {
        ++lo;
        continue;
      }
      if (times[j] > c0 + win / 2) break;
      t.push_back(times[j]);
      p.push_back(values[j]);
      w.push_back(1.0);
    }
    if (t.size() < 6) continue;
    double off, a, b;
    detail::fringe_linear_solve(t, p, w, fringe_frequency, off, a, b);
    centers.push_back(c0);
    contrasts.push_back(std::clamp(2.0 * std::hypot(a, b), 0.0, 1.0));
  }
}

}  // namespace ssr
