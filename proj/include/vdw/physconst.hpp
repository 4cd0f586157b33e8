#pragma once

// Physical constants (CODATA 2018) and the few unit conversions used across
// the library. Internal quantities are SI: rad/s, J, m. Atomic units are
// used only for polarizabilities and C3 at the I/O boundary.

#include <cmath>
#include <numbers>

#include "vdw/errors.hpp"

namespace vdw::phys {

inline constexpr double pi = std::numbers::pi;

inline constexpr double hbar = 1.054571817e-34;             // J s
inline constexpr double boltzmann_k = 1.380649e-23;         // J / K
inline constexpr double speed_of_light = 299792458.0;       // m / s
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double hartree_in_joule = 4.3597447222071e-18;
inline constexpr double bohr_radius_in_m = 5.29177210903e-11;

/// 1 eV expressed as an angular frequency, e / hbar.
inline constexpr double eV_to_rad_per_s = elementary_charge / hbar;

/// Atomic unit of polarizability (bohr^3) in m^3.
inline constexpr double au_polarizability_to_m3 =
    bohr_radius_in_m * bohr_radius_in_m * bohr_radius_in_m;

/// Atomic unit of angular frequency, E_h / hbar.
inline constexpr double au_frequency_to_rad_per_s = hartree_in_joule / hbar;

/// Atomic unit of C3 (hartree * bohr^3) in J m^3.
inline constexpr double au_c3_to_joule_m3 = hartree_in_joule * au_polarizability_to_m3;

inline double ev_to_angular(double energy_ev) {
  if (!(energy_ev >= 0.0)) throw DomainError("ev_to_angular: energy must be >= 0");
  return energy_ev * eV_to_rad_per_s;
}

inline double angular_to_ev(double omega) {
  if (!(omega >= 0.0)) throw DomainError("angular_to_ev: frequency must be >= 0");
  return omega / eV_to_rad_per_s;
}

inline double au_to_angular(double xi_au) { return xi_au * au_frequency_to_rad_per_s; }
inline double angular_to_au(double omega) { return omega / au_frequency_to_rad_per_s; }

}  // namespace vdw::phys

namespace vdw {

/// C3 coefficient carried in both unit systems. F = -C3 / a^3.
struct C3Value {
  double value_au = 0.0;  // hartree * bohr^3
  double value_SI = 0.0;  // J m^3

  static C3Value from_si(double c3_si) { return {c3_si / phys::au_c3_to_joule_m3, c3_si}; }
  static C3Value from_au(double c3_au) { return {c3_au, c3_au * phys::au_c3_to_joule_m3}; }
};

inline C3Value c3_to_au(double c3_si) {
  if (!std::isfinite(c3_si)) throw DomainError("c3_to_au: value must be finite");
  return C3Value::from_si(c3_si);
}

}  // namespace vdw
