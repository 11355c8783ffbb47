#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "ssr/constants.hpp"
#include "ssr/errors.hpp"

namespace ssr {

// Atomic constants of the two-level (clock) system. Scattering lengths are
// stored in meters; |up> is the upper hyperfine clock state, |down> the lower.
struct AtomSpecies {
  std::string name = "Rb87";
  double mass = 0.0;                 // kg
  double a_uu = 0.0;                 // m, up-up scattering length
  double a_dd = 0.0;                 // m, down-down
  double a_ud = 0.0;                 // m, inter-state
  double hyperfine_frequency = 0.0;  // Hz
  double zeeman_coefficient = 0.0;   // Hz/G^2, quadratic

  void validate() const {
    if (!(mass > 0.0)) throw input_error("species: mass must be > 0");
    if (!(hyperfine_frequency > 0.0))
      throw input_error("species: hyperfine_frequency must be > 0");
    if (!(zeeman_coefficient > 0.0))
      throw input_error("species: zeeman_coefficient must be > 0");
    if (!std::isfinite(a_uu) || !std::isfinite(a_dd) || !std::isfinite(a_ud))
      throw input_error("species: scattering lengths must be finite");
  }
};

// Shipped default constants for the 87Rb clock states.
// a_uu, a_dd from a coupled-channel analysis; a_ud is a config input in
// scenario files (no published value for the m_F = 0 pair), the value here
// sits between a_uu and a_dd.
inline AtomSpecies rubidium87() {
  AtomSpecies s;
  s.name = "Rb87";
  s.mass = 1.4432e-25;
  s.a_uu = 94.55 * constants::bohr_radius;
  s.a_dd = 100.76 * constants::bohr_radius;
  s.a_ud = 98.09 * constants::bohr_radius;
  s.hyperfine_frequency = 6.834682610904e9;
  s.zeeman_coefficient = 575.15;
  return s;
}

// Ensemble and trap description. Light-shift coefficients are per intensity
// in Hz/(kW cm^-2); only their ratio and the product with mean_intensity
// enter the model, so the intensity unit cancels consistently.
struct PhysicalParams {
  AtomSpecies species;
  double temperature = 0.0;             // K
  double mean_density = 0.0;            // m^-3
  double mean_trap_frequency = 0.0;     // rad/s
  double dls_per_intensity = 0.0;       // Hz/(kW cm^-2), differential
  double total_ls_per_intensity = 0.0;  // Hz/(kW cm^-2), total
  double mean_intensity = 0.0;          // kW cm^-2, ensemble averaged
  double magnetic_field = 0.0;          // G
  double dephasing_correction = 1.6;
  double exchange_correction = 0.6;
  // <= 0 selects the built-in anchor calibration (see collision_rate).
  double collision_calibration = 0.0;

  void validate() const {
    species.validate();
    if (!(temperature > 0.0)) throw input_error("params: temperature must be > 0");
    if (mean_density < 0.0) throw input_error("params: mean_density must be >= 0");
    if (mean_intensity < 0.0) throw input_error("params: mean_intensity must be >= 0");
    if (magnetic_field < 0.0) throw input_error("params: magnetic_field must be >= 0");
    if (dls_per_intensity != 0.0 && total_ls_per_intensity == 0.0)
      throw input_error(
          "params: total_ls_per_intensity must be nonzero when dls_per_intensity is nonzero");
  }
};

// The three model rates plus the homogeneous frequency offset.
// delta0 and omega_ex are angular (rad/s); gamma_c is a plain rate (1/s);
// mean_shift is in Hz because it feeds the fringe frequency directly.
struct RateSet {
  double delta0 = 0.0;      // rad/s, inhomogeneous dephasing rate
  double omega_ex = 0.0;    // rad/s, exchange rate
  double gamma_c = 0.0;     // 1/s, velocity-changing collision rate
  double mean_shift = 0.0;  // Hz, homogeneous transition-frequency offset
};

// gamma/2pi = 2 hbar (a_uu - a_dd) / m, in Hz per (m^-3).
inline double density_shift_coefficient(const AtomSpecies& species) {
  return 2.0 * constants::hbar * (species.a_uu - species.a_dd) / species.mass;
}

inline double light_shift_ratio(const PhysicalParams& p) {
  if (p.dls_per_intensity == 0.0) return 0.0;
  if (p.total_ls_per_intensity == 0.0)
    throw physics_error("dephasing_rate: delta-alpha/alpha undefined (total light shift is zero)");
  return p.dls_per_intensity / p.total_ls_per_intensity;
}

// Delta0 = [k_B T / (2 hbar)] (dalpha/alpha) - gamma nbar / 4, times the
// dephasing correction factor. gamma here is angular: 2 pi times the Hz
// coefficient above.
inline double dephasing_rate(const PhysicalParams& p) {
  const double dls_term =
      constants::k_boltzmann * p.temperature / (2.0 * constants::hbar) * light_shift_ratio(p);
  const double gamma_ang = constants::two_pi * density_shift_coefficient(p.species);
  const double density_term = gamma_ang * p.mean_density / 4.0;
  return p.dephasing_correction * (dls_term - density_term);
}

// omega_ex = (4 pi hbar / m) a_ud nbar, times the exchange correction factor.
inline double exchange_rate(const PhysicalParams& p) {
  return p.exchange_correction * 4.0 * constants::pi * constants::hbar / p.species.mass *
         p.species.a_ud * p.mean_density;
}

namespace detail {

// The collision calibration is anchored so that omega_ex/(pi gamma_c) = 4.8
// at 400 nK for the same parameter set. Since gamma_c scales as sqrt(T), the
// ratio is then 4.8 * sqrt(400 nK / T) for any density (9.6 at 100 nK).
inline constexpr double collision_anchor_ratio = 4.8;
inline constexpr double collision_anchor_temperature = 400e-9;  // K

inline double auto_collision_calibration(const PhysicalParams& p) {
  const double vt0 =
      std::sqrt(constants::k_boltzmann * collision_anchor_temperature * p.species.mass);
  return p.exchange_correction * 4.0 * constants::hbar /
         (collision_anchor_ratio * p.species.a_ud * vt0);
}

}  // namespace detail

// gamma_c = C a_ud^2 nbar sqrt(k_B T / m) with C from the 4.8 anchor unless
// overridden in the parameter set.
inline double collision_rate(const PhysicalParams& p) {
  const double c = p.collision_calibration > 0.0 ? p.collision_calibration
                                                 : detail::auto_collision_calibration(p);
  return c * p.species.a_ud * p.species.a_ud * p.mean_density *
         std::sqrt(constants::k_boltzmann * p.temperature / p.species.mass);
}

// Quadratic Zeeman shift in Hz; B in Gauss.
inline double zeeman_shift(double magnetic_field, const AtomSpecies& species) {
  if (magnetic_field < 0.0) throw physics_error("zeeman_shift: magnetic field must be >= 0");
  return species.zeeman_coefficient * magnetic_field * magnetic_field;
}

// Homogeneous offset of the transition frequency against the zero-field
// hyperfine reference: mean DLS + mean density shift + quadratic Zeeman.
inline double mean_shift(const PhysicalParams& p) {
  return p.dls_per_intensity * p.mean_intensity +
         density_shift_coefficient(p.species) * p.mean_density +
         zeeman_shift(p.magnetic_field, p.species);
}

inline RateSet make_rates(const PhysicalParams& p) {
  p.validate();
  return {dephasing_rate(p), exchange_rate(p), collision_rate(p), mean_shift(p)};
}

// Transition-frequency derivatives used by the noise budget.
inline double dshift_dintensity(const PhysicalParams& p) { return p.dls_per_intensity; }

inline double dshift_dfield(double magnetic_field, const AtomSpecies& species) {
  return 2.0 * species.zeeman_coefficient * magnetic_field;
}

inline double dshift_ddensity(const AtomSpecies& species) {
  return density_shift_coefficient(species);
}

// d<DLS>/dT: the ensemble-averaged intensity drops by (3/2) k_B dT / (h
// |alpha|) when the cloud heats, so the mean DLS moves by (dalpha/alpha)
// (3/2) k_B/h per kelvin.
inline double dmean_dls_dtemperature(const PhysicalParams& p) {
  return 1.5 * constants::k_boltzmann / constants::planck_h * light_shift_ratio(p);
}

// Self-rephasing conditions. The booleans are exactly the comparisons on the
// reported ratios; zero denominators give infinite ratios (condition holds).
struct ConditionReport {
  bool dephasing_ok = false;   // (i)  |Delta0| < omega_ex
  bool mixing_ok = false;      // (ii) gamma_c < omega_ex / pi
  double exchange_to_dephasing = 0.0;  // omega_ex / |Delta0|
  double exchange_to_collision = 0.0;  // omega_ex / (pi gamma_c)
};

inline ConditionReport ssr_conditions(const RateSet& r) {
  if (r.omega_ex < 0.0 || r.gamma_c < 0.0)
    throw physics_error("ssr_conditions: omega_ex and gamma_c must be >= 0");
  ConditionReport rep;
  // Zero denominators are reported as infinite ratios (condition satisfied).
  const double inf = std::numeric_limits<double>::infinity();
  const double ad = std::abs(r.delta0);
  rep.exchange_to_dephasing = ad > 0.0 ? r.omega_ex / ad : inf;
  rep.exchange_to_collision = r.gamma_c > 0.0 ? r.omega_ex / (constants::pi * r.gamma_c) : inf;
  rep.dephasing_ok = rep.exchange_to_dephasing > 1.0;
  rep.mixing_ok = rep.exchange_to_collision > 1.0;
  return rep;
}

}  // namespace ssr
