#pragma once

#include <array>
#include <optional>

#include "spdc/optical_constants.hpp"

namespace spdc {

// Plane-wave mode: transverse lab-frame wave vector and angular frequency.
struct ModeVector {
  double kx = 0.0;
  double ky = 0.0;
  double omega = 0.0;
};

struct SetupParams {
  double L = 1e-3;             // crystal length, m
  double w = 100e-6;           // fiber-mode waist at the crystal output face, m
  double w_pump = 100e-6;      // pump waist, m
  double h = 0.0;              // transverse offset of the coupled beams at the output face, m
  double sigma_pump = 0.0;     // pump spectral width of A_P, rad/s
  double sigma_filter = 0.0;   // filter width of A_F, rad/s
  std::optional<double> theta_s;  // fiber angles; default +theta0 / -theta0
  std::optional<double> theta_i;

  void validate() const;
  double signal_angle(const OpticalConstants& c) const { return theta_s.value_or(c.theta0); }
  double idler_angle(const OpticalConstants& c) const { return theta_i.value_or(-c.theta0); }
};

struct EffectiveParams {
  double Gamma = 0.0;  // relative pump walk-off
  double Theta = 0.0;  // relative shift of the degenerate photons
  double Lcal = 0.0;   // effective length, m
};

struct SpectrumMatrix {
  double ss = 0.0;  // s^2
  double ii = 0.0;
  double si = 0.0;

  double det() const { return ss * ii - si * si; }
  double trace() const { return ss + ii; }
  // w^T Omega w for detunings (ds, di) from omega0.
  double quadratic(double ds, double di) const { return ss * ds * ds + 2.0 * si * ds * di + ii * di * di; }
};

enum class SpectrumForm { Full, SmallAngle };

struct DeltaPair {
  double minus = 0.0;
  double plus = 0.0;
};

// Variables ordered (k_sx, k_sy, k_ix, k_iy, omega_s, omega_i).
inline constexpr int kExpansionDim = 6;
struct DeltaGradient {
  std::array<double, kExpansionDim> minus{};
  std::array<double, kExpansionDim> plus{};
};

// Exact phase mismatch delta_pm = kz_e(s + i) +- kz_o(s) +- kz_o(i). The sum
// vector is rotated into the crystal frame before evaluating kz_e.
DeltaPair delta_pm(const Crystal& crystal, const ModeVector& s, const ModeVector& i);

// Degenerate pair (s0, i0) the model expands around.
ModeVector degenerate_signal(const OpticalConstants& c);
ModeVector degenerate_idler(const OpticalConstants& c);

// First-order derivative table of delta_pm at (s0, i0). The transverse walk-off
// components are gamma cos(phi), gamma sin(phi) for axis-plane angle phi; at
// phi = pi/4 both equal gamma / sqrt(2).
DeltaGradient delta_gradient(const OpticalConstants& c);

EffectiveParams effective_params(const SetupParams& setup, const OpticalConstants& c);

// Spectrum matrix over (omega_s - omega0, omega_i - omega0). The full form
// contains w Gamma / Theta and is rejected with DomainError when Theta = 0.
SpectrumMatrix spectrum_matrix(const SetupParams& setup, const OpticalConstants& c,
                               SpectrumForm form = SpectrumForm::Full);

// Transverse-overlap term w^2 wP^2 theta0^2 / (2 c^2 (w^2 + 2 wP^2)), s^2.
double overlap_term(const SetupParams& setup, const OpticalConstants& c);

// |Omega_si| / Omega_ss in the small-angle form.
double separability_ratio(const SetupParams& setup, const OpticalConstants& c);
// overlap_term - Lcal^2 dbeta^2 / 8 - 1/sigma_P^2; zero on the separable manifold.
double separability_residual(const SetupParams& setup, const OpticalConstants& c);
// Pump width that zeroes the residual; nullopt when none exists.
std::optional<double> separable_pump_width(const SetupParams& setup, const OpticalConstants& c);

// Offset of the coupled beams that maximizes the coupled amplitude.
double optimal_h(const SetupParams& setup, const OpticalConstants& c);

// |psi(omega_s, omega_i)| of the Gaussian model, relative units, at setup.h.
double jsa_analytic(double omega_s, double omega_i, const SetupParams& setup, const OpticalConstants& c,
                    SpectrumForm form = SpectrumForm::Full);

// Pair-coupling probability at the optimal h (setup.h is ignored).
double total_probability(const SetupParams& setup, const OpticalConstants& c,
                         SpectrumForm form = SpectrumForm::Full);

// Rayleigh ranges 1/2 k0 w^2 with k0 = 2 pi n_o(carrier) / lambda in the medium.
struct RayleighDiagnostic {
  double pump_range = 0.0;   // m, at 2 omega0
  double fiber_range = 0.0;  // m, at omega0
  bool long_rayleigh = true; // both ranges >= 10 L
};
RayleighDiagnostic rayleigh_diagnostic(const SetupParams& setup, const Crystal& crystal,
                                       const OpticalConstants& c);

// How a quoted spectral width in wavelength maps onto sigma of exp(-d^2 / 2 sigma^2).
enum class WidthConvention {
  IntensityFwhm,  // full width at half maximum of |A|^2
  Sigma,          // the quoted width is sigma itself
  AmplitudeHalfWidth1e  // half-width where A falls to 1/e
};
double spectral_sigma(double width_wavelength, double carrier_wavelength, WidthConvention convention);

}  // namespace spdc
