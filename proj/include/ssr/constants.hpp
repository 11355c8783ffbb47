#pragma once

namespace ssr::constants {

inline constexpr double hbar = 1.054571817e-34;         // J s
inline constexpr double planck_h = 6.62607015e-34;      // J s
inline constexpr double k_boltzmann = 1.380649e-23;     // J/K
inline constexpr double bohr_radius = 5.29177210903e-11;  // m
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// Unit helpers for config-facing quantities.
inline constexpr double nK = 1e-9;                  // K
inline constexpr double mG = 1e-3;                  // G
inline constexpr double per_cm3_e12 = 1e18;         // 1e12 cm^-3 in m^-3
inline constexpr double micrometer = 1e-6;          // m

}  // namespace ssr::constants
