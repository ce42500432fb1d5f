#include <cmath>
#include <cstring>

#include "doctest.h"
#include "spdc/errors.hpp"
#include "spdc/model.hpp"
#include "spdc/quadrature.hpp"
#include "support.hpp"

using namespace spdc;
using test::g;
using test::rel;

namespace {

const OpticalConstants& C() { return test::bbo().constants; }

// Constants with the emission angle scaled by f; everything else fixed.
OpticalConstants scaled_angle(double f) {
  auto c = C();
  c.theta0 *= f;
  c.theta0_int *= f;
  return c;
}

}  // namespace

TEST_CASE("delta_pm vanishes at the degenerate pair and is symmetric under exchange") {
  const auto& b = test::bbo();
  const auto s0 = degenerate_signal(C());
  const auto i0 = degenerate_idler(C());
  const auto d = delta_pm(b.crystal, s0, i0);
  CHECK(std::abs(d.minus) < 1e-12 * C().omega0 / kSpeedOfLight);
  const double ke = kz_extraordinary(b.sellmeier, 0, 0, 2 * C().omega0, C().alpha);
  CHECK(rel(d.plus, 2 * ke - d.minus) < 1e-15);
  const ModeVector s{1.3e4, -2.1e4, C().omega0 * 1.001};
  const ModeVector i{-0.7e4, 0.4e4, C().omega0 * 0.998};
  const auto a = delta_pm(b.crystal, s, i);
  const auto r = delta_pm(b.crystal, i, s);
  CHECK(a.minus == doctest::Approx(r.minus).epsilon(1e-15));
  CHECK(a.plus == doctest::Approx(r.plus).epsilon(1e-15));
}

TEST_CASE("first-order table entries") {
  const auto t = delta_gradient(C());
  const double gs = C().gamma / std::sqrt(2.0);
  const double tp = C().theta0_int;
  CHECK(t.minus[0] == doctest::Approx(gs + tp).epsilon(1e-15));
  CHECK(t.minus[1] == doctest::Approx(gs).epsilon(1e-15));
  CHECK(t.minus[2] == doctest::Approx(gs - tp).epsilon(1e-15));
  CHECK(t.minus[3] == doctest::Approx(gs).epsilon(1e-15));
  CHECK(t.plus[0] == doctest::Approx(gs - tp).epsilon(1e-15));
  CHECK(t.plus[2] == doctest::Approx(gs + tp).epsilon(1e-15));
  CHECK(t.minus[4] == C().dbeta_minus_z);
  CHECK(t.plus[5] == C().dbeta_plus_z);
  CHECK(rel(t.minus[0] + t.minus[2], std::sqrt(2.0) * C().gamma) < 1e-14);
}

TEST_CASE("first-order table agrees with difference quotients of delta_pm") {
  const auto& b = test::bbo();
  const auto t = delta_gradient(C());
  const double hk = 1e-6 * C().omega0 / kSpeedOfLight;
  const double hw = 1e-6 * C().omega0;
  for (int a = 0; a < kExpansionDim; ++a) {
    const double h = a < 4 ? hk : hw;
    auto at = [&](double x) {
      auto s = degenerate_signal(C());
      auto i = degenerate_idler(C());
      double* v[] = {&s.kx, &s.ky, &i.kx, &i.ky, &s.omega, &i.omega};
      *v[a] += x;
      return delta_pm(b.crystal, s, i);
    };
    const double dm = (at(h).minus - at(-h).minus) / (2 * h);
    const double dp = (at(h).plus - at(-h).plus) / (2 * h);
    CAPTURE(a);
    CHECK(rel(dm, t.minus[a]) < 0.05);
    CHECK(rel(dp, t.plus[a]) < 0.05);
  }
}

TEST_CASE("effective parameters match the reference values") {
  for (const char* tag : {"25um", "100um", "2500um"}) {
    const double w = std::strcmp(tag, "25um") == 0 ? 25e-6 : std::strcmp(tag, "100um") == 0 ? 100e-6 : 2.5e-3;
    const auto e = effective_params(test::setup(1e-3, w, w), C());
    CAPTURE(tag);
    CHECK(rel(e.Gamma, g(std::string("Gamma_") + tag)) < 1e-9);
    CHECK(rel(e.Theta, g(std::string("Theta_") + tag)) < 1e-9);
    CHECK(rel(e.Lcal, g(std::string("Lcal_") + tag)) < 1e-9);
    const auto m = spectrum_matrix(test::setup(1e-3, w, w), C());
    CHECK(rel(m.ss, g(std::string("Omega_ss_") + tag)) < 1e-8);
    CHECK(rel(m.ii, g(std::string("Omega_ii_") + tag)) < 1e-8);
    CHECK(rel(m.si, g(std::string("Omega_si_") + tag)) < 1e-8);
  }
}

TEST_CASE("effective parameter limits") {
  auto s = test::setup(1e-3, 100e-6, 100e-6);
  // Thin crystal: the effective length is the length.
  s.L = 1e-7;
  const auto thin = effective_params(s, C());
  CHECK(rel(thin.Lcal, s.L) < 1e-9);
  CHECK(rel(1.0 - thin.Lcal / s.L, 0.25 * (thin.Theta * thin.Theta + thin.Gamma * thin.Gamma)) < 1e-3);
  // Very wide beams: Gamma and Theta vanish.
  s = test::setup(1e-3, 1.0, 1.0);
  const auto e = effective_params(s, C());
  CHECK(e.Gamma < 1e-4);
  CHECK(e.Theta < 1e-4);
  // Doubling L at fixed waists doubles Gamma and Theta.
  const auto e1 = effective_params(test::setup(1e-3, 50e-6, 80e-6), C());
  const auto e2 = effective_params(test::setup(2e-3, 50e-6, 80e-6), C());
  CHECK(rel(e2.Gamma, 2 * e1.Gamma) < 1e-14);
  CHECK(rel(e2.Theta, 2 * e1.Theta) < 1e-14);
}

TEST_CASE("the full spectrum matrix needs a nonzero Theta") {
  auto c = C();
  c.theta0_int = 0.0;
  const auto s = test::setup(1e-3, 100e-6, 100e-6);
  CHECK_THROWS_AS(spectrum_matrix(s, c, SpectrumForm::Full), DomainError);
  CHECK_NOTHROW(spectrum_matrix(s, c, SpectrumForm::SmallAngle));
}

TEST_CASE("full and small-angle forms converge as theta0 shrinks") {
  const auto s = test::setup(1e-3, 100e-6, 100e-6);
  auto diff = [&](double f) {
    const auto c = scaled_angle(f);
    const auto full = spectrum_matrix(s, c, SpectrumForm::Full);
    const auto small = spectrum_matrix(s, c, SpectrumForm::SmallAngle);
    return std::array<double, 3>{rel(full.ss, small.ss), rel(full.ii, small.ii), rel(full.si, small.si)};
  };
  const auto a = diff(1e-2);
  const auto b = diff(5e-3);
  // The diagonal entries carry a term linear in theta0; the off-diagonal one is quadratic.
  CHECK(a[0] / b[0] == doctest::Approx(2.0).epsilon(0.02));
  CHECK(a[1] / b[1] == doctest::Approx(2.0).epsilon(0.02));
  CHECK(a[2] / b[2] == doctest::Approx(4.0).epsilon(0.02));
  const auto tiny = diff(1e-6 / C().theta0);
  for (double d : tiny) CHECK(d < 1e-6);
}

TEST_CASE("the spectrum matrix is positive definite over the operating range") {
  for (double L : {0.05e-3, 0.3e-3, 1e-3, 5e-3, 20e-3}) {
    for (double w : {5e-6, 30e-6, 300e-6}) {
      for (double wp : {5e-6, 30e-6, 300e-6}) {
        const auto s = test::setup(L, w, wp);
        for (auto form : {SpectrumForm::Full, SpectrumForm::SmallAngle}) {
          const auto m = spectrum_matrix(s, C(), form);
          CHECK(m.ss > 0.0);
          CHECK(m.ii > 0.0);
          CHECK(m.det() > 0.0);
        }
      }
    }
  }
}

TEST_CASE("the separable pump width zeroes the off-diagonal term") {
  auto s = test::setup(0.5e-3, 2.5e-3, 2.5e-3);
  const auto sp = separable_pump_width(s, C());
  REQUIRE(sp.has_value());
  s.sigma_pump = *sp;
  CHECK(std::abs(separability_residual(s, C())) < 1e-12 * overlap_term(s, C()));
  const auto m = spectrum_matrix(s, C(), SpectrumForm::SmallAngle);
  CHECK(std::abs(m.si) < 1e-12 * m.ss);
  CHECK(separability_ratio(s, C()) < 1e-12);
  // Tiny waists leave no room: no separable pump width exists.
  CHECK_FALSE(separable_pump_width(test::setup(1e-3, 5e-6, 5e-6), C()).has_value());
}

TEST_CASE("the separability residual does not depend on the filter") {
  auto s = test::setup(1e-3, 100e-6, 100e-6);
  const double r = separability_residual(s, C());
  s.sigma_filter *= 3.0;
  CHECK(separability_residual(s, C()) == r);
}

TEST_CASE("the optimal offset interpolates between L theta'/2 and L theta'") {
  auto c = C();
  const auto s = test::setup(2e-3, 50e-6, 50e-6);
  const double half = 0.5 * s.L * c.theta0_int;
  const double h = optimal_h(s, c);
  CHECK(h > half);
  CHECK(h < 2 * half);
  c.gamma = 0.0;
  CHECK(optimal_h(s, c) == doctest::Approx(half).epsilon(1e-15));
  c.gamma = 1e3;
  CHECK(rel(optimal_h(s, c), 2 * half) < 1e-6);
}

TEST_CASE("the probability does not depend on the sum group delay") {
  auto c = C();
  const auto s = test::setup(1e-3, 40e-6, 70e-6);
  const double p = total_probability(s, c);
  const double j = jsa_analytic(c.omega0 * 1.001, c.omega0 * 0.999, s, c);
  for (double f : {0.5, 2.0, 1e3}) {
    c.dbeta_plus_z = C().dbeta_plus_z * f;
    const double q = total_probability(s, c);
    CHECK(std::memcmp(&p, &q, sizeof p) == 0);
    CHECK(jsa_analytic(c.omega0 * 1.001, c.omega0 * 0.999, s, c) == j);
  }
}

TEST_CASE("the peak amplitude carries the walk-off factor") {
  auto s = test::setup(1e-3, 100e-6, 100e-6);
  s.h = optimal_h(s, C());
  const double G = g("Gamma_100um");
  const double expected = 8 * kPi * s.w_pump * g("Lcal_100um") / (s.w * s.w + 2 * s.w_pump * s.w_pump) *
                          std::exp(-G * G / (2 + G * G));
  CHECK(rel(jsa_analytic(C().omega0, C().omega0, s, C()), expected) < 1e-9);
  // Any other offset lowers the amplitude.
  for (double f : {0.0, 0.5, 0.9, 1.1, 2.0}) {
    auto t = s;
    t.h = f * s.h;
    CHECK(jsa_analytic(C().omega0, C().omega0, t, C()) < jsa_analytic(C().omega0, C().omega0, s, C()));
  }
}

TEST_CASE("the probability equals the integral of the squared amplitude") {
  for (double w : {25e-6, 100e-6}) {
    auto s = test::setup(1e-3, w, 1.3 * w);
    s.h = optimal_h(s, C());
    const auto m = spectrum_matrix(s, C());
    const double span = 8.0 / std::sqrt(std::min(m.ss, m.ii) * (1 - m.si * m.si / (m.ss * m.ii)));
    const auto rule = gauss_legendre_on(200, -span, span);
    double sum = 0.0;
    for (size_t a = 0; a < rule.nodes.size(); ++a) {
      for (size_t b = 0; b < rule.nodes.size(); ++b) {
        const double j = jsa_analytic(C().omega0 + rule.nodes[a], C().omega0 + rule.nodes[b], s, C());
        sum += rule.weights[a] * rule.weights[b] * j * j;
      }
    }
    CAPTURE(w);
    CHECK(rel(total_probability(s, C()), sum) < 1e-8);
  }
}

TEST_CASE("the probability falls as the emission angle grows") {
  const auto& b = test::bbo();
  const auto s = test::setup(1e-3, 100e-6, 100e-6);
  double previous = INFINITY;
  double previous_fixed = INFINITY;
  for (double deg = 0.5; deg <= 3.0 + 1e-9; deg += 0.25) {
    const auto crystal = phase_matched_crystal(b.sellmeier, 780e-9, deg * units::deg, 0.25 * kPi);
    const auto c = derive_constants(b.sellmeier, crystal.cut, 780e-9, deg * units::deg);
    const double p = total_probability(s, c);
    CHECK(p < previous);
    previous = p;
    const double q = total_probability(s, scaled_angle(deg / 1.4));
    CHECK(q < previous_fixed);
    previous_fixed = q;
  }
}

TEST_CASE("spectral width conventions") {
  const double width = 5e-9;
  const double dw = spectral_width_to_omega(width, 390e-9);
  const double s1 = spectral_sigma(width, 390e-9, WidthConvention::AmplitudeHalfWidth1e);
  CHECK(std::exp(-dw * dw / (2 * s1 * s1)) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  const double s2 = spectral_sigma(width, 390e-9, WidthConvention::IntensityFwhm);
  const double half = 0.5 * dw;
  CHECK(std::exp(-half * half / (s2 * s2)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(spectral_sigma(width, 390e-9, WidthConvention::Sigma) == dw);
}

TEST_CASE("Rayleigh diagnostic") {
  const auto& b = test::bbo();
  CHECK(rayleigh_diagnostic(test::setup(1e-3, 100e-6, 100e-6), b.crystal, C()).long_rayleigh);
  const auto d = rayleigh_diagnostic(test::setup(10e-3, 10e-6, 10e-6), b.crystal, C());
  CHECK_FALSE(d.long_rayleigh);
  CHECK(d.pump_range == doctest::Approx(2 * d.fiber_range * b.sellmeier.index_at(Polarization::Ordinary, 2 * C().omega0) /
                                        b.sellmeier.index_at(Polarization::Ordinary, C().omega0)));
}

TEST_CASE("setup validation and fiber angles") {
  auto s = test::setup(1e-3, 100e-6, 100e-6);
  CHECK_NOTHROW(s.validate());
  s.L = 0;
  CHECK_THROWS_AS(s.validate(), DomainError);
  s = test::setup(1e-3, 100e-6, 100e-6);
  s.sigma_filter = -1;
  CHECK_THROWS_AS(s.validate(), DomainError);
  s = test::setup(1e-3, 100e-6, 100e-6);
  s.theta_s = 2 * C().theta0;
  CHECK_THROWS_AS(total_probability(s, C()), DomainError);
}

TEST_CASE("without walk-off and emission angle the transverse derivatives vanish") {
  auto c = C();
  c.gamma = 0.0;
  c.theta0_int = 0.0;
  const auto t = delta_gradient(c);
  for (int a = 0; a < 4; ++a) {
    CHECK(t.minus[a] == 0.0);
    CHECK(t.plus[a] == 0.0);
  }
  CHECK(effective_params(test::setup(1e-3, 50e-6, 50e-6), c).Gamma == 0.0);
}

TEST_CASE("the small-angle amplitude is symmetric under photon exchange") {
  auto s = test::setup(2e-3, 40e-6, 90e-6);
  s.h = 0.7 * optimal_h(s, C());
  for (double a : {-2e12, 0.0, 1e12}) {
    for (double b : {-1e12, 0.5e12, 3e12}) {
      const double ws = C().omega0 + a;
      const double wi = C().omega0 + b;
      CHECK(jsa_analytic(ws, wi, s, C(), SpectrumForm::SmallAngle) ==
            jsa_analytic(wi, ws, s, C(), SpectrumForm::SmallAngle));
    }
  }
}
