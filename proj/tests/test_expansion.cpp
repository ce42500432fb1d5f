#include <cmath>

#include "doctest.h"
#include "spdc/errors.hpp"
#include "spdc/expansion.hpp"
#include "support.hpp"

using namespace spdc;
using test::rel;

namespace {

const ExpansionOrder2& E() {
  static const auto e = expand_delta_order2(test::bbo().crystal, test::bbo().constants);
  return e;
}

double comp(const DeltaPair& d, int sign) { return sign == 0 ? d.minus : d.plus; }

// Step and natural Hessian scale per variable: wave vectors vs frequencies.
double step(int a, const OpticalConstants& c, double rel_step) {
  return rel_step * (a < 4 ? c.omega0 / kSpeedOfLight : c.omega0);
}
double hess_scale(int a, int b, const OpticalConstants& c) {
  return kSpeedOfLight / c.omega0 * (a < 4 ? 1.0 : 1.0 / kSpeedOfLight) * (b < 4 ? 1.0 : 1.0 / kSpeedOfLight);
}

// Five-point derivative of delta along a, evaluated directly on delta_pm.
double independent_gradient(int sign, int a) {
  const auto& b = test::bbo();
  const double h = step(a, b.constants, 2e-3);
  auto f = [&](double t) {
    Vector6 x = Vector6::Zero();
    x(a) = t;
    return comp(delta_at(b.crystal, b.constants, x), sign);
  };
  return (-f(2 * h) + 8 * f(h) - 8 * f(-h) + f(-2 * h)) / (12 * h);
}

// Fourth-order mixed stencil (product of five-point rules) for the Hessian.
double independent_hessian(int sign, int a, int b_) {
  const auto& b = test::bbo();
  const double ha = step(a, b.constants, 5e-3);
  const double hb = step(b_, b.constants, 5e-3);
  auto f = [&](double ta, double tb) {
    Vector6 x = Vector6::Zero();
    x(a) += ta;
    x(b_) += tb;
    return comp(delta_at(b.crystal, b.constants, x), sign);
  };
  if (a == b_) {
    return (-f(2 * ha, 0) + 16 * f(ha, 0) - 30 * f(0, 0) + 16 * f(-ha, 0) - f(-2 * ha, 0)) / (12 * ha * ha);
  }
  const double w[] = {1, -8, 0, 8, -1};
  double sum = 0;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      if (w[i] == 0 || w[j] == 0) continue;
      sum += w[i] * w[j] * f((i - 2) * ha, (j - 2) * hb);
    }
  }
  return sum / (144 * ha * hb);
}

}  // namespace

TEST_CASE("gradient agrees with an independent difference quotient") {
  const auto& c = test::bbo().constants;
  const double angle_scale = std::abs(c.gamma) + std::abs(c.theta0_int);
  for (int sign = 0; sign < 2; ++sign) {
    for (int a = 0; a < kExpansionDim; ++a) {
      const double got = sign == 0 ? E().grad_minus(a) : E().grad_plus(a);
      const double want = independent_gradient(sign, a);
      const double scale = a < 4 ? angle_scale : std::abs(want);
      CAPTURE(sign);
      CAPTURE(a);
      CHECK(std::abs(got - want) < 1e-6 * scale);
    }
  }
}

TEST_CASE("Hessian agrees with an independent difference quotient") {
  const auto& c = test::bbo().constants;
  for (int sign = 0; sign < 2; ++sign) {
    for (int a = 0; a < kExpansionDim; ++a) {
      for (int b = 0; b < kExpansionDim; ++b) {
        const double got = sign == 0 ? E().hess_minus(a, b) : E().hess_plus(a, b);
        const double want = independent_hessian(sign, a, b);
        CAPTURE(sign);
        CAPTURE(a);
        CAPTURE(b);
        CHECK(std::abs(got - want) < 1e-6 * std::max(hess_scale(a, b, c), std::abs(want)));
      }
    }
  }
}

TEST_CASE("gradient is close to the first-order table") {
  const auto& c = test::bbo().constants;
  const auto t = first_order_table(c);
  for (int a = 0; a < kExpansionDim; ++a) {
    CAPTURE(a);
    if (a < 4) {
      // The table keeps first order in the angles.
      CHECK(std::abs(E().grad_minus(a) - t.grad_minus(a)) < 0.01 * (c.gamma + c.theta0_int));
      CHECK(std::abs(E().grad_plus(a) - t.grad_plus(a)) < 0.01 * (c.gamma + c.theta0_int));
    } else {
      // The table uses on-axis group delays; the tilted ordinary waves differ at order theta'^2.
      CHECK(rel(E().grad_minus(a), t.grad_minus(a)) < 0.01);
      CHECK(rel(E().grad_plus(a), t.grad_plus(a)) < 1e-4);
    }
  }
  CHECK(std::abs(E().value_minus) < 1e-12 * c.omega0 / kSpeedOfLight);
}

TEST_CASE("Hessians are symmetric") {
  for (int a = 0; a < kExpansionDim; ++a) {
    for (int b = 0; b < a; ++b) {
      for (const Matrix6* h : {&E().hess_minus, &E().hess_plus}) {
        const double m = std::max(std::abs((*h)(a, b)), std::abs((*h)(b, a)));
        if (m == 0.0) continue;
        CHECK(std::abs((*h)(a, b) - (*h)(b, a)) <= 1e-8 * m);
      }
    }
  }
}

TEST_CASE("an isotropic medium has the paraxial diffraction Hessian") {
  const double n = 1.5;
  const SellmeierCoefficients flat{n * n, 0, 0, 0};
  Crystal iso{SellmeierSet("flat", flat, flat, 0.2e-6, 2e-6), CrystalCut{0.5, 0.25 * kPi}};
  OpticalConstants c;
  c.omega0 = angular_frequency(780e-9);
  c.axis_plane_angle = 0.25 * kPi;
  c.n_o_deg = n;
  const auto e = expand_delta_order2(iso, c);
  const double k = c.omega0 * n / kSpeedOfLight;
  for (int a : {0, 1, 2, 3}) {
    CHECK(rel(e.hess_minus(a, a), 1.0 / (2 * k)) < 1e-8);
    CHECK(rel(e.hess_plus(a, a), -3.0 / (2 * k)) < 1e-8);
    // The ordinary terms alone contribute 1/k.
    CHECK(rel(0.5 * (e.hess_minus(a, a) - e.hess_plus(a, a)), 1.0 / k) < 1e-8);
  }
  CHECK(rel(e.hess_minus(0, 2), -1.0 / (2 * k)) < 1e-8);
  CHECK(rel(e.hess_minus(1, 3), -1.0 / (2 * k)) < 1e-8);
  CHECK(std::abs(e.hess_minus(0, 1)) < 1e-10 / k);
  // Without dispersion the frequency block is zero for delta_minus.
  CHECK(std::abs(e.grad_minus(4)) < 1e-8 * n / kSpeedOfLight);
  CHECK(rel(e.grad_plus(4), 2 * n / kSpeedOfLight) < 1e-8);
}

TEST_CASE("the mirrored expansion equals the expansion of the mirrored cut") {
  const auto& b = test::bbo();
  Crystal mirror = b.crystal;
  mirror.cut.axis_plane_angle = -b.crystal.cut.axis_plane_angle;
  OpticalConstants cm = b.constants;
  cm.axis_plane_angle = mirror.cut.axis_plane_angle;
  const auto em = expand_delta_order2(mirror, cm);
  const auto ref = E().mirrored();
  const double gs = b.constants.gamma + b.constants.theta0_int;
  for (int a = 0; a < kExpansionDim; ++a) {
    const double gscale = a < 4 ? gs : std::abs(ref.grad_plus(a));
    CHECK(std::abs(em.grad_minus(a) - ref.grad_minus(a)) < 1e-8 * gscale);
    CHECK(std::abs(em.grad_plus(a) - ref.grad_plus(a)) < 1e-8 * gscale);
    for (int c = 0; c < kExpansionDim; ++c) {
      const double s = hess_scale(a, c, b.constants);
      CHECK(std::abs(em.hess_minus(a, c) - ref.hess_minus(a, c)) < 1e-8 * s);
      CHECK(std::abs(em.hess_plus(a, c) - ref.hess_plus(a, c)) < 1e-8 * s);
    }
  }
}

TEST_CASE("the quadratic model tracks delta_pm") {
  const auto& b = test::bbo();
  const auto& c = b.constants;
  const double k = c.omega0 / kSpeedOfLight;
  Vector6 x;
  x << 2e-3 * k, -1e-3 * k, 1.5e-3 * k, 0.5e-3 * k, 4e-3 * c.omega0, -3e-3 * c.omega0;
  for (double f : {1.0, 0.5, 0.25}) {
    const auto exact = delta_at(b.crystal, c, f * x);
    const auto model = E().evaluate(f * x);
    const auto linear = E().linear().evaluate(f * x);
    // The residual of the quadratic model is third order, the linear one second order.
    CHECK(std::abs(exact.minus - model.minus) < 0.05 * std::abs(exact.minus - linear.minus));
  }
}

TEST_CASE("Richardson orders at a truncation-dominated step") {
  StepControl s;
  s.relative_step = 0.05;
  const auto e = expand_delta_order2(test::bbo().crystal, test::bbo().constants, s);
  CHECK(e.min_observed_order >= 2.0);
  CHECK(std::isfinite(e.min_observed_order));
  // At the default step every entry is already at the rounding floor.
  CHECK(E().min_observed_order >= 2.0);
}

TEST_CASE("steps far below the truncation regime fail the convergence check") {
  StepControl s;
  s.relative_step = 1e-9;
  s.noise_tolerance = 1e-12;
  CHECK_THROWS_AS(expand_delta_order2(test::bbo().crystal, test::bbo().constants, s), NumericalError);
}
