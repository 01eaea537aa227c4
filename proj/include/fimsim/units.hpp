#pragma once

// Field-unit conversion constants shared by the flow equations and well model.
namespace fimsim::units {

// mD * ft * psi / cp  ->  bbl/day
inline constexpr double kDarcy = 1.127e-3;

// lbm/ft^3 * ft  ->  psi
inline constexpr double kGravity = 1.0 / 144.0;

inline constexpr double kFt3PerBbl = 5.614583;

}  // namespace fimsim::units
