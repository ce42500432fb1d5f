#pragma once

#include <numbers>

namespace spdc {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = std::numbers::pi;

namespace units {
inline constexpr double nm = 1e-9;
inline constexpr double um = 1e-6;
inline constexpr double mm = 1e-3;
inline constexpr double deg = kPi / 180.0;
}  // namespace units

// Vacuum wavelength (m) <-> angular frequency (rad/s).
constexpr double angular_frequency(double wavelength) { return 2.0 * kPi * kSpeedOfLight / wavelength; }
constexpr double wavelength_of(double omega) { return 2.0 * kPi * kSpeedOfLight / omega; }

// Converts a spectral width in wavelength to angular frequency at the given carrier.
constexpr double spectral_width_to_omega(double width_wavelength, double carrier_wavelength) {
  return 2.0 * kPi * kSpeedOfLight / (carrier_wavelength * carrier_wavelength) * width_wavelength;
}

}  // namespace spdc
