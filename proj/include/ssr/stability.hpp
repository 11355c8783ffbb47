#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ssr/constants.hpp"
#include "ssr/errors.hpp"
#include "ssr/fringe.hpp"

namespace ssr {

// Mid-fringe small-signal inversion of P = offset + (C/2) cos(2 pi dnu T_R)
// around quadrature: y = (P - offset) / (pi T_R C nu0).
inline double p_to_frequency(double p, const FringeFit& fit, double interrogation_time,
                             double nu0) {
  if (!(interrogation_time > 0.0)) throw input_error("p_to_frequency: T_R must be > 0");
  if (!(fit.contrast > 0.0)) throw input_error("p_to_frequency: contrast must be > 0");
  const double dp = p - fit.offset;
  if (std::abs(dp) > 0.4 * fit.contrast)
    throw physics_error("p_to_frequency: operating point out of quadrature (|P - offset| > 0.4 C)");
  return dp / (constants::pi * interrogation_time * fit.contrast * nu0);
}

// Exact arcsine inversion, for cross-checks against the linear form.
inline double p_to_frequency_exact(double p, const FringeFit& fit, double interrogation_time,
                                   double nu0) {
  const double u = 2.0 * (p - fit.offset) / fit.contrast;
  if (std::abs(u) > 1.0) throw physics_error("p_to_frequency_exact: |P - offset| > C/2");
  return std::asin(u) / (constants::two_pi * interrogation_time * nu0);
}

// Quantum projection noise: sigma_y(tau) = sqrt(T_c / (N tau)) / (2 pi nu0
// T_R C). Returns the tau = 1 s value (the white-noise coefficient).
inline double qpn_limit(double n_atoms, double interrogation_time, double cycle_time,
                        double contrast, double nu0) {
  if (!(n_atoms > 0.0 && interrogation_time > 0.0 && cycle_time > 0.0 && nu0 > 0.0))
    throw input_error("qpn_limit: all inputs must be > 0");
  if (!(contrast > 0.0 && contrast <= 1.0))
    throw input_error("qpn_limit: contrast must be in (0, 1]");
  return std::sqrt(cycle_time / n_atoms) /
         (constants::two_pi * nu0 * interrogation_time * contrast);
}

// One technical noise source: a per-shot level in its physical unit and the
// transition-frequency sensitivity in Hz per unit. The fractional-frequency
// contribution is |sensitivity * level| / nu0.
struct NoiseSource {
  std::string name;
  double shot_level = 0.0;
  double sensitivity = 0.0;  // Hz per unit of shot_level

  double fractional_noise(double nu0) const {
    if (!std::isfinite(sensitivity))
      throw input_error("noise source '" + name + "': missing sensitivity");
    return std::abs(sensitivity * shot_level) / nu0;
  }
};

struct QpnInputs {
  double n_atoms = 0.0;
  double interrogation_time = 0.0;  // s
  double cycle_time = 0.0;          // s
  double contrast = 0.0;
  double nu0 = 0.0;  // Hz
};

struct BudgetEntry {
  std::string name;
  double shot_level = 0.0;
  double sensitivity = 0.0;
  double delta_nu = 0.0;      // Hz per shot
  double sigma_y_shot = 0.0;  // fractional, one shot
  double sigma_y_1s = 0.0;    // white-noise coefficient at tau = 1 s
};

struct BudgetReport {
  std::vector<BudgetEntry> entries;
  double total_shot = 0.0;  // root sum of squares
  double total_1s = 0.0;
  double qpn_shot = 0.0;
  double qpn_1s = 0.0;
};

// Root-sum-square budget over the technical sources, with the projection
// noise floor reported alongside (not folded into the total). One-shot
// values rescale to tau = 1 s assuming white noise: sigma(1 s) = sigma_shot
// sqrt(T_c).
inline BudgetReport noise_budget(const std::vector<NoiseSource>& sources, const QpnInputs& qpn) {
  if (!(qpn.nu0 > 0.0)) throw input_error("noise_budget: nu0 must be > 0");
  BudgetReport rep;
  const double to_1s = std::sqrt(qpn.cycle_time);
  double ss = 0.0;
  for (const NoiseSource& s : sources) {
    BudgetEntry e;
    e.name = s.name;
    e.shot_level = s.shot_level;
    e.sensitivity = s.sensitivity;
    e.delta_nu = std::abs(s.sensitivity * s.shot_level);
    e.sigma_y_shot = s.fractional_noise(qpn.nu0);
    e.sigma_y_1s = e.sigma_y_shot * to_1s;
    ss += e.sigma_y_shot * e.sigma_y_shot;
    rep.entries.push_back(e);
  }
  rep.total_shot = std::sqrt(ss);
  rep.total_1s = rep.total_shot * to_1s;
  rep.qpn_1s = qpn_limit(qpn.n_atoms, qpn.interrogation_time, qpn.cycle_time, qpn.contrast,
                         qpn.nu0);
  rep.qpn_shot = rep.qpn_1s / std::sqrt(qpn.cycle_time);
  return rep;
}

// Binomial projection-noise Monte Carlo: per-shot population transfers of N
// atoms measured at mid-fringe probability p.
inline std::vector<double> synth_projection_noise(std::size_t n_shots, std::uint64_t n_atoms,
                                                  double p, std::uint64_t seed) {
  if (!(p > 0.0 && p < 1.0)) throw input_error("synth_projection_noise: p must be in (0, 1)");
  std::mt19937_64 rng(seed);
  std::binomial_distribution<std::uint64_t> bin(n_atoms, p);
  std::vector<double> out(n_shots);
  for (double& v : out) v = static_cast<double>(bin(rng)) / static_cast<double>(n_atoms);
  return out;
}

}  // namespace ssr
