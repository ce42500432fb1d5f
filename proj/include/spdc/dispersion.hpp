#pragma once

#include "spdc/sellmeier.hpp"

namespace spdc {

// Orientation of a uniaxial crystal relative to the lab frame.
// alpha: optic axis to crystal normal Z. axis_plane_angle: plane containing the
// optic axis, measured from the horizontal lab plane (x axis).
struct CrystalCut {
  double alpha = 0.0;
  double axis_plane_angle = 0.25 * 3.14159265358979323846;

  void validate() const;
};

// Longitudinal wave-vector components in the crystal frame (X along the
// projection of the optic axis). All arguments SI; throw DomainError for
// evanescent input.
double kz_ordinary(const SellmeierSet& s, double kX, double kY, double omega);
double kz_extraordinary(const SellmeierSet& s, double kX, double kY, double omega, double alpha);

// d kz_e / d kX at kX = kY = 0 (the walk-off angle for a wave along Z).
double walkoff_angle(const SellmeierSet& s, double omega, double alpha);

// d kz / d omega at kX = kY = 0, from the analytic Sellmeier derivative.
double inverse_group_velocity_ordinary(const SellmeierSet& s, double omega);
double inverse_group_velocity_extraordinary(const SellmeierSet& s, double omega, double alpha);

// Lab transverse (kx, ky) -> crystal (kX, kY) for a given axis-plane angle.
struct TransverseK {
  double kX;
  double kY;
};
TransverseK to_crystal_frame(double kx, double ky, double axis_plane_angle);

}  // namespace spdc
