// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <numbers>

namespace raqmimo::constants {

// CODATA 2018 exact / recommended values, SI units.
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double k_b = 1.380649e-23;           // J / K
inline constexpr double c0 = 299792458.0;             // m / s
inline constexpr double epsilon0 = 8.8541878128e-12;  // F / m
inline constexpr double mu0 = 1.25663706212e-6;       // H / m
inline constexpr double eta0 = mu0 * c0;              // vacuum wave impedance, Ohm
inline constexpr double e_a0 = 8.4783536255e-30;      // atomic unit of dipole moment, C m

}  // namespace raqmimo::constants
