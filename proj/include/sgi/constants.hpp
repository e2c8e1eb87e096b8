#pragma once

// Physical constants, CODATA-2018, SI units.
namespace sgi::constants {

inline constexpr double hbar = 1.054571817e-34;   // J s
inline constexpr double mu0 = 1.25663706212e-6;   // T m / A
inline constexpr double k_B = 1.380649e-23;       // J / K
inline constexpr double mu_B = 9.2740100783e-24;  // J / T

// Default particle magnetic moment: electron-spin g factor times the Bohr magneton.
inline constexpr double g_s = 2.0;

}  // namespace sgi::constants
