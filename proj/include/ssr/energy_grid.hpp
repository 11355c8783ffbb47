#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "ssr/errors.hpp"

namespace ssr {

// Discretization of the thermal energy distribution of a 3D harmonic trap.
// Energies are dimensionless, eps = E/(k_B T); the density of states goes as
// eps^2, so the thermal weight is eps^2 exp(-eps) (gamma distribution of
// shape 3: mean 3, variance 3).
struct EnergyClassGrid {
  std::vector<double> epsilons;
  std::vector<double> weights;  // normalized, sum == 1

  std::size_t size() const { return epsilons.size(); }

  double mean_epsilon() const {
    double m = 0.0;
    for (std::size_t i = 0; i < size(); ++i) m += weights[i] * epsilons[i];
    return m;
  }

  double variance_epsilon() const {
    const double m = mean_epsilon();
    double v = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
      const double d = epsilons[i] - m;
      v += weights[i] * d * d;
    }
    return v;
  }
};

// Midpoint discretization of (0, epsilon_max] into n_classes bins.
inline EnergyClassGrid build_energy_grid(std::size_t n_classes, double epsilon_max) {
  if (n_classes < 2) throw input_error("build_energy_grid: n_classes must be >= 2");
  if (!(epsilon_max > 3.0))
    throw input_error("build_energy_grid: epsilon_max must exceed the thermal mean (3)");

  EnergyClassGrid grid;
  grid.epsilons.resize(n_classes);
  grid.weights.resize(n_classes);
  const double de = epsilon_max / static_cast<double>(n_classes);
  double sum = 0.0;
  for (std::size_t i = 0; i < n_classes; ++i) {
    const double eps = (static_cast<double>(i) + 0.5) * de;
    grid.epsilons[i] = eps;
    grid.weights[i] = eps * eps * std::exp(-eps);
    sum += grid.weights[i];
  }
  for (double& w : grid.weights) w /= sum;
  return grid;
}

}  // namespace ssr
