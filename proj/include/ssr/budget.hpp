#pragma once

#include <vector>

#include "ssr/config.hpp"
#include "ssr/errors.hpp"
#include "ssr/physics.hpp"
#include "ssr/stability.hpp"

namespace ssr {

// Assembles the measured per-shot noise levels of a scenario into budget
// sources using the transition-frequency derivatives from the physics core.
//
//   maser        supplied directly as fractional frequency per shot
//   detection    sigma_P through the mid-fringe conversion 1/(pi T_R C)
//   intensity    relative intensity noise; dnu/dI * I per unit fraction
//   pointing     beam displacement dx; dnu = |dls| I (dx/w)^2 (curvature)
//   magnetic     dnu/dB = 2 K_Z B
//   density      relative density noise; dnu/dn * nbar per unit fraction
//   temperature  d<DLS>/dT
inline std::vector<NoiseSource> build_noise_sources(const PhysicalParams& params,
                                                    const BudgetConfig& budget) {
  const double nu0 = params.species.hyperfine_frequency;
  std::vector<NoiseSource> sources;

  sources.push_back({"maser", budget.maser_floor_y, nu0});
  sources.push_back({"detection", budget.detection_sigma_p,
                     1.0 / (constants::pi * budget.interrogation_time * budget.contrast)});
  const double dls_total = dshift_dintensity(params) * params.mean_intensity;  // Hz at I
  sources.push_back({"intensity", budget.intensity_rin, dls_total});
  // Quadratic pointing model: fractional intensity change (dx/w)^2, expressed
  // as a linear sensitivity evaluated at the shot level.
  const double pointing_sens =
      budget.beam_waist > 0.0
          ? dls_total * budget.pointing / (budget.beam_waist * budget.beam_waist)
          : 0.0;
  sources.push_back({"pointing", budget.pointing, pointing_sens});
  sources.push_back(
      {"magnetic", budget.field_noise, dshift_dfield(params.magnetic_field, params.species)});
  sources.push_back({"density", budget.density_fraction,
                     dshift_ddensity(params.species) * params.mean_density});
  sources.push_back({"temperature", budget.temperature_noise, dmean_dls_dtemperature(params)});
  return sources;
}

inline BudgetReport scenario_budget(const Scenario& sc) {
  if (!sc.budget) throw input_error("scenario '" + sc.name + "' has no [budget] section");
  const BudgetConfig& b = *sc.budget;
  QpnInputs qpn{b.atom_number, b.interrogation_time, b.cycle_time, b.contrast,
                sc.params.species.hyperfine_frequency};
  return noise_budget(build_noise_sources(sc.params, b), qpn);
}

}  // namespace ssr
