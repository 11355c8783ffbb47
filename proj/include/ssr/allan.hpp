#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "ssr/constants.hpp"
#include "ssr/errors.hpp"

namespace ssr {

// Per-shot fractional-frequency series at a fixed cycle time.
struct StabilitySeries {
  std::vector<double> y;
  double cycle_time = 0.0;  // s

  void validate() const {
    if (!(cycle_time > 0.0)) throw input_error("stability series: cycle_time must be > 0");
    if (y.size() < 3) throw input_error("stability series: need at least 3 shots");
  }
};

struct AdevPoint {
  double tau = 0.0;   // s
  double adev = 0.0;  // sigma_y(tau)
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t m = 0;  // averaging factor tau / tau0
  double edf = 0.0;
};

namespace detail {

// Standard-normal quantile (Acklam rational approximation, ~1e-9 accuracy).
inline double normal_quantile(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - plow) {
    q = p - 0.5;
    r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  q = std::sqrt(-2.0 * std::log(1.0 - p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

// Chi-square quantile via the Wilson-Hilferty approximation.
inline double chi2_quantile(double p, double dof) {
  const double z = normal_quantile(p);
  const double t = 1.0 - 2.0 / (9.0 * dof) + z * std::sqrt(2.0 / (9.0 * dof));
  return dof * t * t * t;
}

// Equivalent degrees of freedom of the overlapping estimator for white FM
// noise (Howe/Beard approximation).
inline double white_fm_edf(std::size_t count, std::size_t m) {
  const double n = static_cast<double>(count);
  const double md = static_cast<double>(m);
  const double base = 3.0 * (n - 1.0) / (2.0 * md) - 2.0 * (n - 2.0) / n;
  return base * 4.0 * md * md / (4.0 * md * md + 5.0);
}

}  // namespace detail

// Overlapping Allan variance at averaging factor m:
//   sigma^2(m tau0) = sum_j [ sum_{i=j}^{j+m-1} (y_{i+m} - y_i) ]^2
//                     / (2 m^2 (M - 2m + 1)),   j = 0 .. M-2m.
inline AdevPoint overlapping_adev_point(const StabilitySeries& series, std::size_t m,
                                        double confidence = 0.683) {
  series.validate();
  const std::size_t count = series.y.size();
  if (m == 0 || 2 * m >= count)
    throw input_error("overlapping_adev: need 3m <= count for averaging factor m");

  // Prefix sums of d_i = y_{i+m} - y_i make each inner block sum O(1).
  const std::size_t nd = count - m;
  std::vector<double> prefix(nd + 1, 0.0);
  for (std::size_t i = 0; i < nd; ++i)
    prefix[i + 1] = prefix[i] + (series.y[i + m] - series.y[i]);

  const std::size_t n_terms = count - 2 * m + 1;
  double acc = 0.0;
  for (std::size_t j = 0; j < n_terms; ++j) {
    const double block = prefix[j + m] - prefix[j];
    acc += block * block;
  }
  const double md = static_cast<double>(m);
  const double avar = acc / (2.0 * md * md * static_cast<double>(n_terms));

  AdevPoint pt;
  pt.m = m;
  pt.tau = md * series.cycle_time;
  pt.adev = std::sqrt(avar);
  pt.edf = detail::white_fm_edf(count, m);
  const double alpha = 1.0 - confidence;
  if (pt.edf > 0.0 && pt.adev > 0.0) {
    pt.ci_low = pt.adev * std::sqrt(pt.edf / detail::chi2_quantile(1.0 - alpha / 2.0, pt.edf));
    pt.ci_high = pt.adev * std::sqrt(pt.edf / detail::chi2_quantile(alpha / 2.0, pt.edf));
  }
  return pt;
}

// All requested averaging factors; ms empty selects the octave sequence
// 1, 2, 4, ... up to the 3m <= count limit.
inline std::vector<AdevPoint> overlapping_adev(const StabilitySeries& series,
                                               std::vector<std::size_t> ms = {}) {
  series.validate();
  if (ms.empty())
    for (std::size_t m = 1; 3 * m <= series.y.size(); m *= 2) ms.push_back(m);
  std::vector<AdevPoint> out;
  out.reserve(ms.size());
  for (std::size_t m : ms) out.push_back(overlapping_adev_point(series, m));
  return out;
}

// Least-squares white-noise coefficient: sigma_y(tau) = A tau^(-1/2).
inline double fit_white_coefficient(const std::vector<AdevPoint>& pts) {
  if (pts.empty()) throw input_error("fit_white_coefficient: no points");
  double s = 0.0;
  std::size_t n = 0;
  for (const AdevPoint& p : pts) {
    if (!(p.adev > 0.0)) continue;
    s += std::log(p.adev) + 0.5 * std::log(p.tau);
    ++n;
  }
  if (n == 0) throw input_error("fit_white_coefficient: all points zero");
  return std::exp(s / static_cast<double>(n));
}

// Log-log slope of sigma_y(tau), for noise-type discrimination.
inline double fit_loglog_slope(const std::vector<AdevPoint>& pts) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (const AdevPoint& p : pts) {
    if (!(p.adev > 0.0)) continue;
    const double x = std::log(p.tau), y = std::log(p.adev);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw input_error("fit_loglog_slope: need >= 2 nonzero points");
  const double nd = static_cast<double>(n);
  return (nd * sxy - sx * sy) / (nd * sxx - sx * sx);
}

// --- deterministic noise synthesis -----------------------------------------

inline std::vector<double> synth_white_fm(std::size_t n, double sigma_shot, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, sigma_shot);
  std::vector<double> y(n);
  for (double& v : y) v = gauss(rng);
  return y;
}

inline std::vector<double> synth_random_walk_fm(std::size_t n, double step_sigma,
                                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, step_sigma);
  std::vector<double> y(n);
  double acc = 0.0;
  for (double& v : y) {
    acc += gauss(rng);
    v = acc;
  }
  return y;
}

// Optional slow sinusoidal modulation (e.g. a 10-minute air-conditioning
// cycle) added on top of a synthesized series.
inline void add_sinusoid(std::vector<double>& y, double amplitude, double period_s,
                         double cycle_time, double phase = 0.0) {
  if (!(period_s > 0.0)) throw input_error("add_sinusoid: period must be > 0");
  for (std::size_t i = 0; i < y.size(); ++i)
    y[i] += amplitude *
            std::sin(constants::two_pi * static_cast<double>(i) * cycle_time / period_s + phase);
}

}  // namespace ssr
