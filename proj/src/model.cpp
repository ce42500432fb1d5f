#include "spdc/model.hpp"

#include <cmath>

#include "spdc/errors.hpp"
#include "spdc/units.hpp"

namespace spdc {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

void require_default_fibers(const SetupParams& setup, const OpticalConstants& c) {
  if (setup.signal_angle(c) != c.theta0 || setup.idler_angle(c) != -c.theta0) {
    throw DomainError("the Gaussian model is stated for fibers at +theta0 / -theta0");
  }
}

}  // namespace

void SetupParams::validate() const {
  if (!(L > 0.0)) throw DomainError("setup: crystal length must be positive");
  if (!(w > 0.0)) throw DomainError("setup: fiber-mode waist must be positive");
  if (!(w_pump > 0.0)) throw DomainError("setup: pump waist must be positive");
  if (!(sigma_pump > 0.0)) throw DomainError("setup: pump spectral width must be positive");
  if (!(sigma_filter > 0.0)) throw DomainError("setup: filter spectral width must be positive");
}

DeltaPair delta_pm(const Crystal& crystal, const ModeVector& s, const ModeVector& i) {
  const auto& sm = crystal.sellmeier;
  const auto sum = to_crystal_frame(s.kx + i.kx, s.ky + i.ky, crystal.cut.axis_plane_angle);
  const double ke = kz_extraordinary(sm, sum.kX, sum.kY, s.omega + i.omega, crystal.cut.alpha);
  // kz_o is isotropic in the transverse plane; no rotation needed.
  const double ks = kz_ordinary(sm, s.kx, s.ky, s.omega);
  const double ki = kz_ordinary(sm, i.kx, i.ky, i.omega);
  return {ke - ks - ki, ke + ks + ki};
}

ModeVector degenerate_signal(const OpticalConstants& c) {
  return {c.theta0 * c.omega0 / kSpeedOfLight, 0.0, c.omega0};
}

ModeVector degenerate_idler(const OpticalConstants& c) {
  return {-c.theta0 * c.omega0 / kSpeedOfLight, 0.0, c.omega0};
}

DeltaGradient delta_gradient(const OpticalConstants& c) {
  const double gx = c.gamma * std::cos(c.axis_plane_angle);
  const double gy = c.gamma * std::sin(c.axis_plane_angle);
  const double t = c.theta0_int;
  DeltaGradient g;
  g.minus = {gx + t, gy, gx - t, gy, c.dbeta_minus_z, c.dbeta_minus_z};
  g.plus = {gx - t, gy, gx + t, gy, c.dbeta_plus_z, c.dbeta_plus_z};
  return g;
}

EffectiveParams effective_params(const SetupParams& setup, const OpticalConstants& c) {
  EffectiveParams e;
  e.Gamma = setup.L * c.gamma / std::sqrt(setup.w * setup.w + 2.0 * setup.w_pump * setup.w_pump);
  e.Theta = setup.L * c.theta0_int / setup.w;
  e.Lcal = setup.L / std::sqrt(1.0 + 0.5 * e.Theta * e.Theta + 0.5 * e.Gamma * e.Gamma);
  return e;
}

double overlap_term(const SetupParams& setup, const OpticalConstants& c) {
  const double w2 = setup.w * setup.w;
  const double wp2 = setup.w_pump * setup.w_pump;
  return w2 * wp2 * c.theta0 * c.theta0 / (2.0 * kSpeedOfLight * kSpeedOfLight * (w2 + 2.0 * wp2));
}

SpectrumMatrix spectrum_matrix(const SetupParams& setup, const OpticalConstants& c, SpectrumForm form) {
  const auto e = effective_params(setup, c);
  const double overlap = overlap_term(setup, c);
  const double pump = 1.0 / (setup.sigma_pump * setup.sigma_pump);
  const double filter = 1.0 / (setup.sigma_filter * setup.sigma_filter);
  const double l8 = e.Lcal * e.Lcal / 8.0;

  SpectrumMatrix m;
  if (form == SpectrumForm::SmallAngle) {
    const double crystal = l8 * c.dbeta_minus_z * c.dbeta_minus_z;
    m.ss = crystal + overlap + pump + filter;
    m.ii = m.ss;
    m.si = crystal - overlap + pump;
    return m;
  }

  if (e.Theta == 0.0) {
    throw DomainError("full spectrum matrix is undefined for Theta = 0 (w Gamma / Theta); use the small-angle form");
  }
  const double base = c.dbeta_minus_z + c.theta0 * c.theta0_int / kSpeedOfLight;
  const double asym = c.theta0 * c.theta0_int / (kSqrt2 * kSpeedOfLight) * (setup.w * e.Gamma / e.Theta) /
                      std::sqrt(setup.w * setup.w + 2.0 * setup.w_pump * setup.w_pump);
  m.ss = l8 * (base + asym) * (base + asym) + overlap + pump + filter;
  m.ii = l8 * (base - asym) * (base - asym) + overlap + pump + filter;
  m.si = l8 * (base * base - asym * asym) - overlap + pump;
  return m;
}

double separability_ratio(const SetupParams& setup, const OpticalConstants& c) {
  const auto m = spectrum_matrix(setup, c, SpectrumForm::SmallAngle);
  return std::abs(m.si) / m.ss;
}

double separability_residual(const SetupParams& setup, const OpticalConstants& c) {
  const auto e = effective_params(setup, c);
  return overlap_term(setup, c) - e.Lcal * e.Lcal * c.dbeta_minus_z * c.dbeta_minus_z / 8.0 -
         1.0 / (setup.sigma_pump * setup.sigma_pump);
}

std::optional<double> separable_pump_width(const SetupParams& setup, const OpticalConstants& c) {
  const auto e = effective_params(setup, c);
  const double room = overlap_term(setup, c) - e.Lcal * e.Lcal * c.dbeta_minus_z * c.dbeta_minus_z / 8.0;
  if (!(room > 0.0)) return std::nullopt;
  return 1.0 / std::sqrt(room);
}

double optimal_h(const SetupParams& setup, const OpticalConstants& c) {
  const double g2 = effective_params(setup, c).Gamma;
  const double G2 = g2 * g2;
  return 0.5 * setup.L * c.theta0_int * (1.0 + G2) / (1.0 + 0.5 * G2);
}

double jsa_analytic(double omega_s, double omega_i, const SetupParams& setup, const OpticalConstants& c,
                    SpectrumForm form) {
  require_default_fibers(setup, c);
  const auto e = effective_params(setup, c);
  const auto m = spectrum_matrix(setup, c, form);
  const double G2 = e.Gamma * e.Gamma;
  const double T2 = e.Theta * e.Theta;
  const double w2 = setup.w * setup.w;
  const double wp2 = setup.w_pump * setup.w_pump;

  const double prefactor = 8.0 * kPi * setup.w_pump * e.Lcal / (w2 + 2.0 * wp2);
  const double ds = omega_s - c.omega0;
  const double di = omega_i - c.omega0;
  const double spectral = std::exp(-G2 / (2.0 + G2) - 0.5 * m.quadratic(ds, di));
  const double offset = setup.h - optimal_h(setup, c);
  const double shift = std::exp(-(2.0 * (2.0 + G2) / w2) / (2.0 + T2 + G2) * offset * offset);
  return prefactor * spectral * shift;
}

double total_probability(const SetupParams& setup, const OpticalConstants& c, SpectrumForm form) {
  require_default_fibers(setup, c);
  const auto e = effective_params(setup, c);
  const auto m = spectrum_matrix(setup, c, form);
  const double G2 = e.Gamma * e.Gamma;
  const double denom = setup.w * setup.w + 2.0 * setup.w_pump * setup.w_pump;
  return 64.0 * kPi * kPi * kPi * setup.w_pump * setup.w_pump * e.Lcal * e.Lcal /
         (denom * denom * std::sqrt(m.det())) * std::exp(-2.0 * G2 / (2.0 + G2));
}

RayleighDiagnostic rayleigh_diagnostic(const SetupParams& setup, const Crystal& crystal, const OpticalConstants& c) {
  auto range = [&](double omega, double waist) {
    const double n = crystal.sellmeier.index_at(Polarization::Ordinary, omega);
    return 0.5 * (omega * n / kSpeedOfLight) * waist * waist;
  };
  RayleighDiagnostic d;
  d.pump_range = range(2.0 * c.omega0, setup.w_pump);
  d.fiber_range = range(c.omega0, setup.w);
  d.long_rayleigh = d.pump_range >= 10.0 * setup.L && d.fiber_range >= 10.0 * setup.L;
  return d;
}

double spectral_sigma(double width_wavelength, double carrier_wavelength, WidthConvention convention) {
  const double width = spectral_width_to_omega(width_wavelength, carrier_wavelength);
  switch (convention) {
    case WidthConvention::IntensityFwhm:
      // |A|^2 = exp(-d^2 / sigma^2) has FWHM 2 sigma sqrt(ln 2).
      return width / (2.0 * std::sqrt(std::log(2.0)));
    case WidthConvention::Sigma:
      return width;
    case WidthConvention::AmplitudeHalfWidth1e:
      return width / kSqrt2;
  }
  return width;
}

}  // namespace spdc
