#pragma once

#include "spdc/dispersion.hpp"

namespace spdc {

// delta_minus at the degenerate pair s0 = (theta0 w0/c, 0, w0), i0 = (-theta0 w0/c, 0, w0):
// kz_e(0, 0, 2 w0) - 2 kz_o(theta0 w0 / c, 0, w0). The sum vector has no transverse
// component, so the axis-plane angle drops out.
double degenerate_mismatch(const SellmeierSet& s, double lambda0, double theta0, double alpha);

// Optic-axis angle alpha in (0, pi/2) that phase-matches degenerate emission at
// external half-angle theta0. Bisection followed by secant polishing; the result
// satisfies |mismatch| < 1e-12 * w0 / c. Throws PhaseMatchingError without a sign change.
double solve_phase_matching(const SellmeierSet& s, double lambda0, double theta0);

// Inverse problem: emission half-angle theta0 >= 0 for a given alpha. Closed form
// in kz_o; throws PhaseMatchingError when alpha admits no real emission angle.
double solve_emission_angle(const SellmeierSet& s, double lambda0, double alpha);

}  // namespace spdc
