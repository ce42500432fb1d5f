#include "spdc/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spdc/errors.hpp"
#include "spdc/finite_difference.hpp"
#include "spdc/units.hpp"

namespace spdc {

DeltaPair ExpansionOrder2::evaluate(const Vector6& x) const {
  return {value_minus + grad_minus.dot(x) + 0.5 * x.dot(hess_minus * x),
          value_plus + grad_plus.dot(x) + 0.5 * x.dot(hess_plus * x)};
}

ExpansionOrder2 ExpansionOrder2::linear() const {
  ExpansionOrder2 e = *this;
  e.hess_minus.setZero();
  e.hess_plus.setZero();
  return e;
}

ExpansionOrder2 ExpansionOrder2::mirrored() const {
  Vector6 sign;
  sign << 1, -1, 1, -1, 1, 1;
  ExpansionOrder2 e = *this;
  e.grad_minus = grad_minus.cwiseProduct(sign);
  e.grad_plus = grad_plus.cwiseProduct(sign);
  e.hess_minus = sign.asDiagonal() * hess_minus * sign.asDiagonal();
  e.hess_plus = sign.asDiagonal() * hess_plus * sign.asDiagonal();
  return e;
}

ExpansionOrder2 first_order_table(const OpticalConstants& c) {
  const auto g = delta_gradient(c);
  ExpansionOrder2 e;
  for (int a = 0; a < kExpansionDim; ++a) {
    e.grad_minus(a) = g.minus[a];
    e.grad_plus(a) = g.plus[a];
  }
  e.min_observed_order = std::numeric_limits<double>::infinity();
  return e;
}

DeltaPair delta_at(const Crystal& crystal, const OpticalConstants& c, const Vector6& x) {
  const auto s0 = degenerate_signal(c);
  const auto i0 = degenerate_idler(c);
  const ModeVector s{s0.kx + x(0), s0.ky + x(1), s0.omega + x(4)};
  const ModeVector i{i0.kx + x(2), i0.ky + x(3), i0.omega + x(5)};
  return delta_pm(crystal, s, i);
}

namespace {

struct EntryCheck {
  double min_order = std::numeric_limits<double>::infinity();
  const StepControl* step = nullptr;
  double scale = 1.0;

  double accept(const DerivativeEstimate& d, const char* what, int a, int b) {
    const double rel = d.error_estimate / std::max(scale, std::abs(d.value));
    // Above the noise tolerance an entry must show a measured order; an
    // infinite order there means the differences are pure rounding.
    if (rel > step->noise_tolerance) {
      if (!(std::isfinite(d.observed_order) && d.observed_order >= step->min_order)) {
        std::ostringstream msg;
        msg << "finite differences for " << what << "[" << a << "][" << b << "] did not converge: observed order "
            << d.observed_order << ", relative error " << rel;
        throw NumericalError(msg.str(), d.coarse, d.value);
      }
    }
    min_order = std::min(min_order, d.observed_order);
    return d.value;
  }
};

}  // namespace

ExpansionOrder2 expand_delta_order2(const Crystal& crystal, const OpticalConstants& c, const StepControl& step) {
  std::array<double, kExpansionDim> h{};
  for (int a = 0; a < kExpansionDim; ++a) {
    h[a] = step.relative_step * (a < 4 ? c.omega0 / kSpeedOfLight : c.omega0);
  }
  auto at = [&](int a, double ta, int b, double tb) {
    Vector6 x = Vector6::Zero();
    x(a) += ta;
    x(b) += tb;
    return delta_at(crystal, c, x);
  };

  ExpansionOrder2 e;
  const auto d0 = delta_at(crystal, c, Vector6::Zero());
  e.value_minus = d0.minus;
  e.value_plus = d0.plus;

  // Scales for the noise test: the typical size of each block.
  const double grad_scale = std::abs(c.gamma) + std::abs(c.theta0_int) + 1e-300;
  // Size of the individual wave-vector terms in delta.
  const double magnitude = 4.0 * c.n_o_deg * c.omega0 / kSpeedOfLight;
  EntryCheck check{std::numeric_limits<double>::infinity(), &step, 1.0};

  for (int sign = 0; sign < 2; ++sign) {
    auto comp = [sign](const DeltaPair& d) { return sign == 0 ? d.minus : d.plus; };
    Vector6& grad = sign == 0 ? e.grad_minus : e.grad_plus;
    Matrix6& hess = sign == 0 ? e.hess_minus : e.hess_plus;

    for (int a = 0; a < kExpansionDim; ++a) {
      auto f = [&](double t) { return comp(at(a, t, a, 0.0)); };
      const auto d = derivative(f, 0.0, h[a], magnitude);
      // Gradient entries carry different units; scale each against the natural
      // size of its block (angles for k, phase delay n/c for omega).
      check.scale = a < 4 ? grad_scale : c.n_o_deg / kSpeedOfLight + std::abs(c.dbeta_minus_z) + 1e-300;
      grad(a) = check.accept(d, sign == 0 ? "grad_minus" : "grad_plus", a, a);
    }

    // Hessian: derivative in x_b of the central-difference gradient in x_a,
    // computed independently for (a, b) and (b, a).
    for (int a = 0; a < kExpansionDim; ++a) {
      for (int b = 0; b < kExpansionDim; ++b) {
        auto grad_a = [&](double tb, double ha) {
          return (comp(at(a, ha, b, tb)) - comp(at(a, -ha, b, tb))) / (2.0 * ha);
        };
        auto level = [&](double scale_down) {
          const double ha = h[a] / scale_down;
          const double hb = h[b] / scale_down;
          if (a == b) {
            const double f0 = comp(at(a, 0.0, a, 0.0));
            return (comp(at(a, ha, a, 0.0)) - 2.0 * f0 + comp(at(a, -ha, a, 0.0))) / (ha * ha);
          }
          return (grad_a(hb, ha) - grad_a(-hb, ha)) / (2.0 * hb);
        };
        double d[4];
        for (int k = 0; k < 4; ++k) d[k] = level(static_cast<double>(1 << k));
        // Rounding floor of the finest stencil.
        const double noise = 64.0 * magnitude;
        const auto est = detail::richardson(d, noise / (h[a] * h[b]));
        // Natural Hessian scale (c / omega0) s_a s_b, with s = 1 for wave vectors
        // and 1/c for frequencies.
        const double sa = a < 4 ? 1.0 : 1.0 / kSpeedOfLight;
        const double sb = b < 4 ? 1.0 : 1.0 / kSpeedOfLight;
        check.scale = kSpeedOfLight / c.omega0 * sa * sb;
        hess(a, b) = check.accept(est, sign == 0 ? "hess_minus" : "hess_plus", a, b);
      }
    }
  }
  e.min_observed_order = check.min_order;
  return e;
}

}  // namespace spdc
