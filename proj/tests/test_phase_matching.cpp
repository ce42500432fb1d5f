#include <chrono>
#include <cmath>

#include "doctest.h"
#include "spdc/errors.hpp"
#include "spdc/optical_constants.hpp"
#include "spdc/phase_matching.hpp"
#include "support.hpp"

using namespace spdc;
using test::g;
using test::rel;

TEST_CASE("BBO at 780 nm and 1.4 deg phase-matches at the reference angle") {
  const auto s = bbo_sellmeier();
  const auto t0 = std::chrono::steady_clock::now();
  const double alpha = solve_phase_matching(s, 780e-9, test::kTheta0);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(seconds < 1.0);
  CHECK(std::abs(alpha - g("alpha_rad")) < 1e-11);
  const double omega0 = angular_frequency(780e-9);
  CHECK(std::abs(degenerate_mismatch(s, 780e-9, test::kTheta0, alpha)) < 1e-12 * omega0 / kSpeedOfLight);
}

TEST_CASE("alpha and theta0 round-trip") {
  const auto s = bbo_sellmeier();
  for (double deg : {0.5, 1.0, 1.4, 2.0, 3.0, 5.0}) {
    const double theta0 = deg * units::deg;
    const double alpha = solve_phase_matching(s, 780e-9, theta0);
    CHECK(std::abs(solve_emission_angle(s, 780e-9, alpha) - theta0) < 1e-9);
  }
}

TEST_CASE("collinear emission is the lower end of the alpha range") {
  const auto s = bbo_sellmeier();
  const double a0 = solve_phase_matching(s, 780e-9, 0.0);
  CHECK(solve_emission_angle(s, 780e-9, a0) < 1e-5);
  CHECK(solve_phase_matching(s, 780e-9, 2 * units::deg) > a0);
  CHECK_THROWS_AS(solve_emission_angle(s, 780e-9, 0.9 * a0), PhaseMatchingError);
}

TEST_CASE("an isotropic set cannot be phase-matched") {
  const SellmeierCoefficients o{2.75, 0.0188, 0.0182, 0.0135};
  const SellmeierSet iso("isotropic", o, o, 0.2e-6, 1.1e-6);
  CHECK_THROWS_AS(solve_phase_matching(iso, 780e-9, test::kTheta0), PhaseMatchingError);
}

TEST_CASE("derived constants match the reference values") {
  const auto& b = test::bbo();
  const auto& c = b.constants;
  CHECK(rel(c.alpha, g("alpha_rad")) < 1e-10);
  CHECK(rel(c.gamma, g("gamma_rad")) < 1e-9);
  CHECK(rel(c.dbeta_minus_z, g("dbeta_minus_z")) < 1e-8);
  CHECK(rel(c.dbeta_plus_z, g("dbeta_plus_z")) < 1e-10);
  CHECK(rel(c.theta0_int, g("theta0_internal_rad")) < 1e-12);
  CHECK(rel(c.theta0_int * c.n_o_deg, test::kTheta0) < 1e-15);
  CHECK(c.dbeta_plus_z > c.dbeta_minus_z);
  CHECK(c.gamma > 0.0);
  CHECK(c.omega0 == angular_frequency(780e-9));
}

TEST_CASE("a cut that does not phase-match the requested angle is rejected") {
  const auto& b = test::bbo();
  CHECK_THROWS_AS(derive_constants(b.sellmeier, b.crystal.cut, 780e-9, 2.0 * units::deg), PhaseMatchingError);
  CHECK_NOTHROW(derive_constants(b.sellmeier, b.crystal.cut, 780e-9));
  CHECK(std::abs(derive_constants(b.sellmeier, b.crystal.cut, 780e-9).theta0 - test::kTheta0) < 1e-9);
}
