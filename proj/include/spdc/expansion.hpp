#pragma once

#include <Eigen/Core>

#include "spdc/model.hpp"

namespace spdc {

using Vector6 = Eigen::Matrix<double, kExpansionDim, 1>;
using Matrix6 = Eigen::Matrix<double, kExpansionDim, kExpansionDim>;

// Second-order Taylor model of delta_pm around (s0, i0) in the variables
// (dk_sx, dk_sy, dk_ix, dk_iy, d omega_s, d omega_i).
struct ExpansionOrder2 {
  double value_minus = 0.0;
  double value_plus = 0.0;
  Vector6 grad_minus = Vector6::Zero();
  Vector6 grad_plus = Vector6::Zero();
  Matrix6 hess_minus = Matrix6::Zero();
  Matrix6 hess_plus = Matrix6::Zero();
  // Smallest observed step-halving order over all entries; entries already at
  // the rounding floor count as infinite.
  double min_observed_order = 0.0;

  DeltaPair evaluate(const Vector6& x) const;
  // The first-order part only (Hessians zeroed).
  ExpansionOrder2 linear() const;
  // Mirror y -> -y: flips every term odd in (k_sy, k_iy).
  ExpansionOrder2 mirrored() const;
};

// The analytic first-order table packaged as an expansion (delta values zero,
// Hessians zero).
ExpansionOrder2 first_order_table(const OpticalConstants& c);

struct StepControl {
  double relative_step = 1e-2;  // of omega0/c for wave vectors, of omega0 for frequencies
  double min_order = 1.8;       // required observed order for entries above the noise floor
  double noise_tolerance = 1e-7;  // relative error accepted without an order check
};

// Richardson-verified central differences of delta_pm. Throws NumericalError
// when an entry neither shows a finite order >= min_order nor sits below noise_tolerance.
ExpansionOrder2 expand_delta_order2(const Crystal& crystal, const OpticalConstants& c,
                                    const StepControl& step = {});

// Exact delta_pm at the expansion variables x (used for spot checks).
DeltaPair delta_at(const Crystal& crystal, const OpticalConstants& c, const Vector6& x);

}  // namespace spdc
