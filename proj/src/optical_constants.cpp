#include "spdc/optical_constants.hpp"

#include <cmath>

#include "spdc/errors.hpp"
#include "spdc/phase_matching.hpp"
#include "spdc/units.hpp"

namespace spdc {

OpticalConstants derive_constants(const SellmeierSet& s, const CrystalCut& cut, double lambda0, double theta0) {
  cut.validate();
  const double omega0 = angular_frequency(lambda0);
  // Refuse cuts that do not phase-match the requested emission angle.
  const double residual = degenerate_mismatch(s, lambda0, theta0, cut.alpha);
  if (std::abs(residual) > 1e-9 * omega0 / kSpeedOfLight) {
    throw PhaseMatchingError("crystal cut does not phase-match the requested (lambda0, theta0)");
  }

  OpticalConstants c;
  c.omega0 = omega0;
  c.theta0 = theta0;
  c.n_o_deg = s.index_at(Polarization::Ordinary, omega0);
  c.theta0_int = theta0 / c.n_o_deg;
  c.gamma = walkoff_angle(s, 2.0 * omega0, cut.alpha);
  const double beta_e = inverse_group_velocity_extraordinary(s, 2.0 * omega0, cut.alpha);
  const double beta_o = inverse_group_velocity_ordinary(s, omega0);
  c.dbeta_minus_z = beta_e - beta_o;
  c.dbeta_plus_z = beta_e + beta_o;
  c.alpha = cut.alpha;
  c.axis_plane_angle = cut.axis_plane_angle;
  return c;
}

OpticalConstants derive_constants(const SellmeierSet& s, const CrystalCut& cut, double lambda0) {
  cut.validate();
  return derive_constants(s, cut, lambda0, solve_emission_angle(s, lambda0, cut.alpha));
}

Crystal phase_matched_crystal(const SellmeierSet& s, double lambda0, double theta0, double axis_plane_angle) {
  return Crystal{s, CrystalCut{solve_phase_matching(s, lambda0, theta0), axis_plane_angle}};
}

}  // namespace spdc
