#pragma once

#include <numbers>

namespace casimir::constants {

// Exact SI-defined values (2019 redefinition).
inline constexpr double planck = 6.62607015e-34;                 // J s
inline constexpr double hbar = planck / (2.0 * std::numbers::pi); // J s
inline constexpr double boltzmann = 1.380649e-23;                 // J/K
inline constexpr double speed_of_light = 299792458.0;             // m/s

inline constexpr double pi = std::numbers::pi;

}  // namespace casimir::constants
