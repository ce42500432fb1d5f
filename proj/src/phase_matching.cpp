#include "spdc/phase_matching.hpp"

#include <cmath>
#include <sstream>

#include "spdc/errors.hpp"
#include "spdc/units.hpp"

namespace spdc {

double degenerate_mismatch(const SellmeierSet& s, double lambda0, double theta0, double alpha) {
  const double omega0 = angular_frequency(lambda0);
  return kz_extraordinary(s, 0.0, 0.0, 2.0 * omega0, alpha) -
         2.0 * kz_ordinary(s, theta0 * omega0 / kSpeedOfLight, 0.0, omega0);
}

double solve_phase_matching(const SellmeierSet& s, double lambda0, double theta0) {
  const double omega0 = angular_frequency(lambda0);
  const double tolerance = 1e-12 * omega0 / kSpeedOfLight;
  auto f = [&](double alpha) { return degenerate_mismatch(s, lambda0, theta0, alpha); };

  double lo = 0.0;
  double hi = 0.5 * kPi;
  double flo = f(lo);
  double fhi = f(hi);
  if (!(flo * fhi < 0.0)) {
    std::ostringstream msg;
    msg << s.name() << " is not phase-matchable at " << lambda0 / units::nm << " nm, theta0 = "
        << theta0 / units::deg << " deg: mismatch has no sign change over alpha in (0, pi/2)";
    throw PhaseMatchingError(msg.str());
  }

  // Bisection to a tight bracket.
  for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }

  // Secant refinement, kept inside the bracket.
  double a = lo, fa = flo, b = hi, fb = fhi;
  double best = std::abs(fa) < std::abs(fb) ? a : b;
  double fbest = std::min(std::abs(fa), std::abs(fb));
  for (int it = 0; it < 50 && fbest >= tolerance; ++it) {
    double x = b - fb * (b - a) / (fb - fa);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    const double fx = f(x);
    if (std::abs(fx) < fbest) {
      best = x;
      fbest = std::abs(fx);
    }
    if ((fx < 0.0) == (flo < 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
    a = b;
    fa = fb;
    b = x;
    fb = fx;
    if (fa == fb) break;
  }
  if (fbest >= tolerance) {
    throw PhaseMatchingError("phase-matching solve did not reach |mismatch| < 1e-12 w0/c");
  }
  return best;
}

double solve_emission_angle(const SellmeierSet& s, double lambda0, double alpha) {
  const double omega0 = angular_frequency(lambda0);
  const double half_pump = 0.5 * kz_extraordinary(s, 0.0, 0.0, 2.0 * omega0, alpha);
  const double k = omega0 * s.index_at(Polarization::Ordinary, omega0) / kSpeedOfLight;
  const double kx2 = k * k - half_pump * half_pump;
  if (kx2 < 0.0) {
    std::ostringstream msg;
    msg << "alpha = " << alpha / units::deg << " deg admits no real degenerate emission angle at "
        << lambda0 / units::nm << " nm";
    throw PhaseMatchingError(msg.str());
  }
  return std::sqrt(kx2) * kSpeedOfLight / omega0;
}

}  // namespace spdc
