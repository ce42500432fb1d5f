#pragma once

#include "spdc/dispersion.hpp"

namespace spdc {

// Scalars that the linearized model needs for a configured crystal cut.
struct OpticalConstants {
  double omega0 = 0.0;        // degenerate angular frequency, rad/s
  double theta0 = 0.0;        // external degenerate emission half-angle, rad
  double theta0_int = 0.0;    // internal angle theta0 / n_o(omega0), rad
  double gamma = 0.0;         // pump walk-off angle at 2 omega0, rad
  double dbeta_minus_z = 0.0; // beta_e(2 omega0) - beta_o(omega0), s/m
  double dbeta_plus_z = 0.0;  // beta_e(2 omega0) + beta_o(omega0), s/m
  double n_o_deg = 0.0;       // n_o(omega0)
  double alpha = 0.0;         // optic-axis angle of the cut, rad
  double axis_plane_angle = 0.0;
};

// The crystal model: dispersion data plus orientation.
struct Crystal {
  SellmeierSet sellmeier;
  CrystalCut cut;
};

// Derives constants for a cut at degenerate wavelength lambda0; theta0 is the
// emission angle the cut phase-matches. Frequency derivatives are analytic in
// the Sellmeier form.
OpticalConstants derive_constants(const SellmeierSet& s, const CrystalCut& cut, double lambda0);
// As above with a target theta0, which must be phase-matched by the cut.
OpticalConstants derive_constants(const SellmeierSet& s, const CrystalCut& cut, double lambda0, double theta0);

// Convenience: solve the cut for (lambda0, theta0) at the given axis-plane angle.
Crystal phase_matched_crystal(const SellmeierSet& s, double lambda0, double theta0, double axis_plane_angle);

}  // namespace spdc
