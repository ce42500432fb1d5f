#include "spdc/dispersion.hpp"

#include <cmath>
#include <sstream>

#include "spdc/errors.hpp"
#include "spdc/units.hpp"

namespace spdc {

void CrystalCut::validate() const {
  if (!(alpha > 0.0 && alpha < 0.5 * kPi)) throw DomainError("crystal cut: alpha must lie in (0, pi/2)");
}

double kz_ordinary(const SellmeierSet& s, double kX, double kY, double omega) {
  const double k = omega * s.index_at(Polarization::Ordinary, omega) / kSpeedOfLight;
  const double arg = k * k - kX * kX - kY * kY;
  if (arg < 0.0) {
    std::ostringstream msg;
    msg << "ordinary wave is evanescent: |k_perp| = " << std::hypot(kX, kY) << " rad/m exceeds k = " << k;
    throw DomainError(msg.str());
  }
  return std::sqrt(arg);
}

double kz_extraordinary(const SellmeierSet& s, double kX, double kY, double omega, double alpha) {
  const double no = s.index_at(Polarization::Ordinary, omega);
  const double ne = s.index_at(Polarization::Extraordinary, omega);
  const double ratio = ne * ne / (no * no);
  const double sa = std::sin(alpha);
  const double ca = std::cos(alpha);
  const double denom = sa * sa + ratio * ca * ca;
  const double ke = omega * ne / kSpeedOfLight;
  const double arg = (ke * ke - kY * kY) * denom - kX * kX * ratio;
  if (arg < 0.0) {
    std::ostringstream msg;
    msg << "extraordinary wave is evanescent at kX = " << kX << ", kY = " << kY << " rad/m";
    throw DomainError(msg.str());
  }
  return (kX * sa * ca * (1.0 - ratio) + std::sqrt(arg)) / denom;
}

double walkoff_angle(const SellmeierSet& s, double omega, double alpha) {
  const double no = s.index_at(Polarization::Ordinary, omega);
  const double ne = s.index_at(Polarization::Extraordinary, omega);
  const double ratio = ne * ne / (no * no);
  const double sa = std::sin(alpha);
  const double ca = std::cos(alpha);
  return sa * ca * (1.0 - ratio) / (sa * sa + ratio * ca * ca);
}

double inverse_group_velocity_ordinary(const SellmeierSet& s, double omega) {
  const double n = s.index_at(Polarization::Ordinary, omega);
  const double dn = s.index_derivative_at(Polarization::Ordinary, omega);
  return (n + omega * dn) / kSpeedOfLight;
}

double inverse_group_velocity_extraordinary(const SellmeierSet& s, double omega, double alpha) {
  // kz_e(0, 0, omega) = omega N / c with 1/N^2 = cos^2(alpha)/no^2 + sin^2(alpha)/ne^2.
  const double no = s.index_at(Polarization::Ordinary, omega);
  const double ne = s.index_at(Polarization::Extraordinary, omega);
  const double dno = s.index_derivative_at(Polarization::Ordinary, omega);
  const double dne = s.index_derivative_at(Polarization::Extraordinary, omega);
  const double c2 = std::cos(alpha) * std::cos(alpha);
  const double s2 = std::sin(alpha) * std::sin(alpha);
  const double N = 1.0 / std::sqrt(c2 / (no * no) + s2 / (ne * ne));
  const double dN = N * N * N * (c2 * dno / (no * no * no) + s2 * dne / (ne * ne * ne));
  return (N + omega * dN) / kSpeedOfLight;
}

TransverseK to_crystal_frame(double kx, double ky, double axis_plane_angle) {
  const double c = std::cos(axis_plane_angle);
  const double s = std::sin(axis_plane_angle);
  return {kx * c + ky * s, -kx * s + ky * c};
}

}  // namespace spdc
