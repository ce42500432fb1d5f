#include <cmath>

#include "doctest.h"
#include "spdc/errors.hpp"
#include "spdc/sellmeier.hpp"
#include "support.hpp"

using namespace spdc;
using test::g;
using test::rel;

TEST_CASE("BBO indices match the high-precision reference") {
  const auto s = bbo_sellmeier();
  CHECK(rel(s.index(Polarization::Ordinary, 780e-9), g("n_o_780nm")) < 1e-12);
  CHECK(rel(s.index(Polarization::Extraordinary, 780e-9), g("n_e_780nm")) < 1e-12);
  CHECK(rel(s.index(Polarization::Ordinary, 390e-9), g("n_o_390nm")) < 1e-12);
  CHECK(rel(s.index(Polarization::Extraordinary, 390e-9), g("n_e_390nm")) < 1e-12);
}

TEST_CASE("bundled constants file equals the embedded set") {
  const auto file = load_sellmeier(SPDC_DATA_DIR "/bbo.constants");
  const auto embedded = bbo_sellmeier();
  for (double lambda : {0.25e-6, 0.39e-6, 0.78e-6, 1.05e-6}) {
    CHECK(file.index(Polarization::Ordinary, lambda) == embedded.index(Polarization::Ordinary, lambda));
    CHECK(file.index(Polarization::Extraordinary, lambda) == embedded.index(Polarization::Extraordinary, lambda));
  }
}

TEST_CASE("a set without dispersion terms returns sqrt(A)") {
  const SellmeierCoefficients flat{2.25, 0.0, 0.0, 0.0};
  const SellmeierSet s("flat", flat, flat, 0.2e-6, 2e-6);
  for (double lambda : {0.3e-6, 0.8e-6, 1.9e-6}) {
    CHECK(s.index(Polarization::Ordinary, lambda) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(s.index_derivative(Polarization::Ordinary, lambda) == 0.0);
  }
}

TEST_CASE("BBO is negative uniaxial with n^2 > 1 across the window") {
  const auto s = bbo_sellmeier();
  for (int k = 0; k <= 90; ++k) {
    const double lambda = s.min_wavelength() + (s.max_wavelength() - s.min_wavelength()) * k / 90.0;
    const double no = s.index(Polarization::Ordinary, lambda);
    const double ne = s.index(Polarization::Extraordinary, lambda);
    CHECK(ne < no);
    CHECK(ne * ne > 1.0);
  }
}

TEST_CASE("wavelengths outside the validity window are rejected") {
  const auto s = bbo_sellmeier();
  CHECK_THROWS_AS(s.index(Polarization::Ordinary, 0.19e-6), DomainError);
  CHECK_THROWS_AS(s.index(Polarization::Extraordinary, 1.2e-6), DomainError);
  CHECK_THROWS_AS(s.index_at(Polarization::Ordinary, angular_frequency(2e-6)), DomainError);
  CHECK_NOTHROW(s.index(Polarization::Ordinary, s.min_wavelength()));
  CHECK_NOTHROW(s.index(Polarization::Ordinary, s.max_wavelength()));
}

TEST_CASE("analytic dn/dlambda and dn/domega agree with a difference quotient") {
  const auto s = bbo_sellmeier();
  for (auto p : {Polarization::Ordinary, Polarization::Extraordinary}) {
    for (double lambda : {0.39e-6, 0.78e-6}) {
      const double h = 1e-10;
      const double fd = (s.index(p, lambda + h) - s.index(p, lambda - h)) / (2 * h);
      CHECK(rel(s.index_derivative(p, lambda), fd) < 1e-6);
      const double omega = angular_frequency(lambda);
      const double hw = 1e-5 * omega;
      const double fdw = (s.index_at(p, omega + hw) - s.index_at(p, omega - hw)) / (2 * hw);
      CHECK(rel(s.index_derivative_at(p, omega), fdw) < 1e-6);
    }
  }
}

TEST_CASE("constants file parsing reports unknown and missing keys") {
  const std::string good =
      "crystal.name = X\n"
      "sellmeier.o.A = 2.7\nsellmeier.o.B = 0.01\nsellmeier.o.C = 0.01\nsellmeier.o.D = 0.01\n"
      "sellmeier.e.A = 2.3\nsellmeier.e.B = 0.01\nsellmeier.e.C = 0.01\nsellmeier.e.D = 0.01\n"
      "validity.min_um = 0.2\nvalidity.max_um = 1.1\n";
  CHECK_NOTHROW(parse_sellmeier(good));
  CHECK(parse_sellmeier(good).name() == "X");
  CHECK_THROWS_AS(parse_sellmeier(good + "sellmeier.o.E = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_sellmeier("crystal.name = X\n"), ConfigError);
  CHECK_THROWS_AS(parse_sellmeier(good + "crystal.name = Y\n"), ConfigError);
  std::string bad = good;
  bad.replace(bad.find("2.7"), 3, "2.7x");
  CHECK_THROWS_AS(parse_sellmeier(bad), ConfigError);
  std::string inverted = good;
  inverted.replace(inverted.find("0.2\n"), 3, "1.5");
  CHECK_THROWS_AS(parse_sellmeier(inverted), ConfigError);
  CHECK_THROWS_AS(load_sellmeier("/nonexistent/file.constants"), ConfigError);
}
