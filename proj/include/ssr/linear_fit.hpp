#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "ssr/errors.hpp"

namespace ssr {

// One measured frequency-shift point; the abscissa is a density (m^-3) for
// the first-stage fits or an intensity (kW cm^-2) for the DLS extrapolation.
struct ShiftPoint {
  double x = 0.0;
  double frequency_shift = 0.0;  // Hz
  double sigma = 0.0;            // Hz, > 0
};

struct LinearFitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_sigma = 0.0;
  double intercept_sigma = 0.0;
  double chi2_reduced = 0.0;
};

// Weighted (1/sigma^2) linear least squares, closed form.
inline LinearFitResult fit_shift_line(const std::vector<ShiftPoint>& points) {
  if (points.size() < 2) throw input_error("fit_shift_line: need at least 2 points");
  double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const ShiftPoint& p : points) {
    if (!(p.sigma > 0.0)) throw input_error("fit_shift_line: sigma must be > 0");
    const double w = 1.0 / (p.sigma * p.sigma);
    sw += w;
    sx += w * p.x;
    sy += w * p.frequency_shift;
    sxx += w * p.x * p.x;
    sxy += w * p.x * p.frequency_shift;
  }
  const double det = sw * sxx - sx * sx;
  if (!(det > 0.0) || !std::isfinite(det) ||
      det <= 1e-12 * sw * sxx)
    throw input_error("fit_shift_line: singular fit (all abscissae equal)");

  LinearFitResult r;
  r.slope = (sw * sxy - sx * sy) / det;
  r.intercept = (sxx * sy - sx * sxy) / det;
  r.slope_sigma = std::sqrt(sw / det);
  r.intercept_sigma = std::sqrt(sxx / det);
  double chi2 = 0.0;
  for (const ShiftPoint& p : points) {
    const double res = (p.frequency_shift - (r.slope * p.x + r.intercept)) / p.sigma;
    chi2 += res * res;
  }
  r.chi2_reduced = points.size() > 2 ? chi2 / static_cast<double>(points.size() - 2) : 0.0;
  return r;
}

// Second extrapolation stage: per-trap zero-density intercepts against the
// ensemble-averaged intensity. Slope = DLS per intensity, intercept =
// residual (Zeeman) shift.
inline LinearFitResult extrapolate_dls(const std::vector<ShiftPoint>& intercepts) {
  if (intercepts.size() < 2) throw input_error("extrapolate_dls: need at least 2 trap points");
  return fit_shift_line(intercepts);
}

}  // namespace ssr
