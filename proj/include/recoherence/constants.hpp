#pragma once

#include <numbers>

namespace recoherence {

// Lorentz-Heaviside units, hbar = c = 1, throughout.
inline constexpr double fine_structure_constant = 1.0 / 137.035999;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Peak speed of the quartic path family is this coefficient times R/T.
inline constexpr double peak_speed_coefficient = 1.5396007178390020; // 8/(3*sqrt(3))

// Path speeds at or above this fraction of c get a non-relativistic
// validity warning; speeds >= 1 are rejected outright.
inline constexpr double relativistic_warning_speed = 0.1;

} // namespace recoherence
