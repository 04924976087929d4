#pragma once

#include <numbers>

// Unit conventions used across the library: hbar = 1, time in ns, every
// rate/coupling in rad/ns.  A drive quoted as "2pi x 20 MHz" is stored as
// 2*pi*0.02 rad/ns.

namespace holopulse {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double mhz_to_rad_per_ns(double f_mhz) { return kTwoPi * f_mhz * 1e-3; }
constexpr double khz_to_rad_per_ns(double f_khz) { return kTwoPi * f_khz * 1e-6; }

// Default hardware ceiling used by the bundled presets.  The cap applies to
// the per-channel coupling amplitude Omega_k(t); its Hamiltonian matrix
// element is Omega_k/2, so this value keeps each matrix element at or below
// 2pi x 20 MHz.
inline constexpr double kDefaultRabiCap = kTwoPi * 0.04;  // rad/ns

// Default decay/dephasing rates for the bundled presets (2pi x 5 kHz each).
inline constexpr double kDefaultDecayRate = kTwoPi * 5e-6;      // Gamma_1, rad/ns
inline constexpr double kDefaultDephasingRate = kTwoPi * 5e-6;  // Gamma_2, rad/ns

}  // namespace holopulse
