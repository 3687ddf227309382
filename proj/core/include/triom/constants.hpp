#pragma once

// Physical constants, CODATA 2018 / SI-2019 exact values.

namespace triom::constants {

inline constexpr double hbar = 1.054571817e-34;  // reduced Planck constant [J s] (h/2pi, h exact)
inline constexpr double k_boltzmann = 1.380649e-23;  // Boltzmann constant [J/K] (exact)
inline constexpr double c_light = 299792458.0;  // speed of light in vacuum [m/s] (exact)
inline constexpr double pi = 3.14159265358979323846;

}  // namespace triom::constants
