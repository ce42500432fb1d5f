#include "spdc/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

#include "spdc/errors.hpp"
#include "spdc/quadrature.hpp"
#include "spdc/units.hpp"

namespace spdc {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};
constexpr int kPanelPoints = 8;

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

// Composite Gauss-Legendre panels of equal width covering [-outer, outer], with
// `core_panels` panels across [-core, core].
QuadratureRule panel_rule(double core, double outer, int core_panels) {
  const double width = 2.0 * core / core_panels;
  int tail = 0;
  if (outer > core + 0.05 * width) tail = static_cast<int>(std::ceil((outer - core) / width));
  tail = std::min(tail, 2000);
  QuadratureRule r;
  const double start = -core - tail * width;
  const int panels = core_panels + 2 * tail;
  for (int p = 0; p < panels; ++p) {
    const auto sub = gauss_legendre_on(kPanelPoints, start + p * width, start + (p + 1) * width);
    r.nodes.insert(r.nodes.end(), sub.nodes.begin(), sub.nodes.end());
    r.weights.insert(r.weights.end(), sub.weights.begin(), sub.weights.end());
  }
  return r;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (transverse_points < 8 || frequency_points < 8 || longitudinal_points < 8) {
    throw DomainError("quadrature: point counts must be >= 8");
  }
  if (transverse_span < 3.0 || frequency_span < 3.0) throw DomainError("quadrature: spans must be >= 3");
  if (!(tolerance > 0.0)) throw DomainError("quadrature: tolerance must be positive");
}

QuadratureSpec QuadratureSpec::refined() const {
  QuadratureSpec r = *this;
  r.transverse_points *= 2;
  r.frequency_points *= 2;
  r.longitudinal_points *= 2;
  r.verify = false;
  return r;
}

CoupledAmplitude::CoupledAmplitude(const SetupParams& setup, const OpticalConstants& c,
                                   const ExpansionOrder2& expansion, const QuadratureSpec& spec,
                                   const OracleModel& model, double max_detuning)
    : setup_(setup),
      c_(c),
      expansion_(model.second_order ? expansion : expansion.linear()),
      spec_(spec),
      model_(model),
      theta_s_(setup.signal_angle(c)),
      theta_i_(setup.idler_angle(c)) {
  setup_.validate();
  spec_.validate();
  if (spec_.transverse == TransverseMethod::ClosedForm) {
    if (model_.full_dispersion) {
      throw DomainError("full-dispersion evaluation needs the tensor transverse method");
    }
  } else {
    return;
  }

  const double L = setup_.L;
  const auto& gm = expansion_.grad_minus;
  // Largest longitudinal phase excursion across the crystal over the frequency window.
  const double phase = 0.5 * L * std::abs(max_detuning) *
                       (std::abs(gm(4)) + std::abs(gm(5)) +
                        (std::abs(gm(0) * theta_s_) + std::abs(gm(2) * theta_i_)) / kSpeedOfLight);
  const int multiple = std::max(1, static_cast<int>(std::ceil((0.75 * phase + 16.0) / 48.0)));
  const int n = std::min(spec_.longitudinal_points * multiple, 4096);

  QuadratureRule rule;
  if (model_.profile == LongitudinalProfile::Sinc) {
    rule = gauss_legendre_on(n, -0.5 * L, 0.5 * L);
  } else {
    // L exp(-(L d/2)^2 / 4) = (2/sqrt(pi)) int exp(-4 z^2 / L^2) exp(i z d) dz
    const auto& gh = gauss_hermite(n);
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int j = 0; j < n; ++j) {
      rule.nodes[j] = 0.5 * L * gh.nodes[j];
      rule.weights[j] = L / std::sqrt(kPi) * gh.weights[j];
    }
  }

  Eigen::Matrix4d a_real = Eigen::Matrix4d::Zero();
  const double wp2 = setup_.w_pump * setup_.w_pump;
  const double w2 = setup_.w * setup_.w;
  for (int a : {0, 2}) {
    for (int b : {0, 2}) a_real(a, b) += 0.5 * wp2;
  }
  for (int a : {1, 3}) {
    for (int b : {1, 3}) a_real(a, b) += 0.5 * wp2;
  }
  a_real += 0.5 * w2 * Eigen::Matrix4d::Identity();

  nodes_.reserve(n);
  for (int j = 0; j < n; ++j) {
    const double z = rule.nodes[j];
    const Matrix6 P = z * expansion_.hess_minus + 0.5 * L * expansion_.hess_plus;
    const Vector6 q = z * expansion_.grad_minus + 0.5 * L * expansion_.grad_plus;
    const Matrix4c A = a_real.cast<cd>() - kI * P.topLeftCorner<4, 4>().cast<cd>();

    ZNode node;
    node.z = z;
    node.weight = rule.weights[j];
    node.a_inv = A.inverse();
    // Re(A) is positive definite, so every eigenvalue has positive real part
    // and the product of principal roots is the analytic continuation of sqrt(det).
    Eigen::ComplexEigenSolver<Matrix4c> es(A, false);
    cd inv_sqrt = 1.0;
    for (int k = 0; k < 4; ++k) inv_sqrt /= std::sqrt(es.eigenvalues()(k));
    node.inv_sqrt_det = inv_sqrt;
    node.q_k = q.head<4>();
    node.q_w = q.tail<2>();
    node.p_kw = P.block<4, 2>(0, 4);
    node.p_ww = P.block<2, 2>(4, 4);
    nodes_.push_back(node);
  }
}

double CoupledAmplitude::spectral_envelope(double ds, double di) const {
  const double sp = setup_.sigma_pump;
  const double sf = setup_.sigma_filter;
  return std::exp(-(ds + di) * (ds + di) / (2.0 * sp * sp) - (ds * ds + di * di) / (2.0 * sf * sf));
}

std::complex<double> CoupledAmplitude::operator()(double omega_s, double omega_i) const {
  const double ds = omega_s - c_.omega0;
  const double di = omega_i - c_.omega0;
  return spec_.transverse == TransverseMethod::ClosedForm ? closed_form(ds, di) : tensor(ds, di);
}

std::complex<double> CoupledAmplitude::closed_form(double ds, double di) const {
  const double w2 = setup_.w * setup_.w;
  const double h = setup_.h;
  const double k0 = c_.omega0 / kSpeedOfLight;
  // Fiber-mode centers relative to the expansion point.
  const double us = (c_.omega0 + ds) * theta_s_ / kSpeedOfLight - c_.theta0 * k0;
  const double ui = (c_.omega0 + di) * theta_i_ / kSpeedOfLight + c_.theta0 * k0;

  Vector4c b0;
  b0 << cd(0.5 * w2 * us, h), 0.0, cd(0.5 * w2 * ui, -h), 0.0;
  const cd c0 = cd(-0.25 * w2 * (us * us + ui * ui), -h * (us - ui));
  const Eigen::Vector2d dw(ds, di);

  cd sum = 0.0;
  for (const auto& n : nodes_) {
    const Vector4c b = b0 + kI * (n.q_k + n.p_kw * dw).cast<cd>();
    const double phase = n.q_w.dot(dw) + 0.5 * dw.dot(n.p_ww * dw) + n.z * expansion_.value_minus;
    const cd expo = 0.5 * (b.transpose() * n.a_inv * b)(0, 0) + c0 + kI * phase;
    sum += n.weight * n.inv_sqrt_det * std::exp(expo);
  }
  // (2 pi)^2 from the Gaussian integral times the (w / sqrt(2 pi))^2 mode normalization.
  return spectral_envelope(ds, di) * setup_.w_pump * w2 * 2.0 * kPi * sum;
}

std::complex<double> CoupledAmplitude::tensor(double ds, double di) const {
  const double L = setup_.L;
  const double w = setup_.w;
  const double w2 = w * w;
  const double wp2 = setup_.w_pump * setup_.w_pump;
  const double h = setup_.h;
  const double k0 = c_.omega0 / kSpeedOfLight;
  const double us = (c_.omega0 + ds) * theta_s_ / kSpeedOfLight - c_.theta0 * k0;
  const double ui = (c_.omega0 + di) * theta_i_ / kSpeedOfLight + c_.theta0 * k0;

  const double half = spec_.transverse_span * std::sqrt(2.0) / w;
  const auto rule = gauss_legendre_on(spec_.transverse_points, -half, half);
  const int n = spec_.transverse_points;

  double plus0 = expansion_.value_plus;
  if (model_.full_dispersion) plus0 = delta_at(*model_.full_dispersion, c_, Vector6::Zero()).plus;

  cd sum = 0.0;
  Vector6 x;
  x(4) = ds;
  x(5) = di;
  for (int a = 0; a < n; ++a) {
    x(0) = us + rule.nodes[a];
    for (int b = 0; b < n; ++b) {
      x(1) = rule.nodes[b];
      for (int cidx = 0; cidx < n; ++cidx) {
        x(2) = ui + rule.nodes[cidx];
        const double wabc = rule.weights[a] * rule.weights[b] * rule.weights[cidx];
        for (int d = 0; d < n; ++d) {
          x(3) = rule.nodes[d];
          const DeltaPair delta =
              model_.full_dispersion ? delta_at(*model_.full_dispersion, c_, x) : expansion_.evaluate(x);
          const double arg = 0.5 * L * delta.minus;
          const double longitudinal =
              model_.profile == LongitudinalProfile::Sinc ? L * sinc(arg) : L * std::exp(-0.25 * arg * arg);
          const double sx = x(0) + x(2);
          const double sy = x(1) + x(3);
          const double gauss = std::exp(-0.25 * wp2 * (sx * sx + sy * sy) -
                                        0.25 * w2 * (rule.nodes[a] * rule.nodes[a] + x(1) * x(1) +
                                                     rule.nodes[cidx] * rule.nodes[cidx] + x(3) * x(3)));
          const double phase = 0.5 * L * (delta.plus - plus0) + h * rule.nodes[a] - h * rule.nodes[cidx];
          sum += wabc * rule.weights[d] * longitudinal * gauss * std::exp(kI * phase);
        }
      }
    }
  }
  return spectral_envelope(ds, di) * setup_.w_pump * w2 / (2.0 * kPi) * sum;
}

double jsa_numeric(double omega_s, double omega_i, const SetupParams& setup, const OpticalConstants& c,
                   const ExpansionOrder2& expansion, const QuadratureSpec& spec, const OracleModel& model) {
  const double detuning = std::max(std::abs(omega_s - c.omega0), std::abs(omega_i - c.omega0));
  CoupledAmplitude amp(setup, c, expansion, spec, model, detuning);
  return std::abs(amp(omega_s, omega_i));
}

namespace {

struct FrequencyWindow {
  double core_u, core_v;    // marginal widths of the analytic spectrum
  double outer_u, outer_v;  // marginal widths of the pump/filter envelope
};

FrequencyWindow frequency_window(const SetupParams& setup, const OpticalConstants& c) {
  SpectrumMatrix m;
  try {
    m = spectrum_matrix(setup, c, SpectrumForm::Full);
  } catch (const DomainError&) {
    m = spectrum_matrix(setup, c, SpectrumForm::SmallAngle);
  }
  // Rotate to u = (ds + di)/sqrt2, v = (ds - di)/sqrt2.
  const double uu = 0.5 * (m.ss + m.ii) + m.si;
  const double vv = 0.5 * (m.ss + m.ii) - m.si;
  const double uv = 0.5 * (m.ss - m.ii);
  const double det = uu * vv - uv * uv;
  FrequencyWindow f;
  // |psi|^2 ~ exp(-x^T Omega x): covariance Omega^-1 / 2.
  f.core_u = std::sqrt(0.5 * vv / det);
  f.core_v = std::sqrt(0.5 * uu / det);
  const double ip = 1.0 / (setup.sigma_pump * setup.sigma_pump);
  const double iff = 1.0 / (setup.sigma_filter * setup.sigma_filter);
  f.outer_u = std::max(f.core_u, std::sqrt(0.5 / (2.0 * ip + iff)));
  f.outer_v = std::max(f.core_v, std::sqrt(0.5 / iff));
  return f;
}

ProbabilityEstimate integrate_probability(const SetupParams& setup, const OpticalConstants& c,
                                          const ExpansionOrder2& expansion, const QuadratureSpec& spec,
                                          const OracleModel& model) {
  const auto win = frequency_window(setup, c);
  const double span = spec.frequency_span;
  const double reach_u = span * win.outer_u;
  const double reach_v = span * win.outer_v;
  const double max_detuning = (reach_u + reach_v) / std::sqrt(2.0);
  const CoupledAmplitude amp(setup, c, expansion, spec, model, max_detuning);

  ProbabilityEstimate est;
  auto density = [&](double u, double v) {
    ++est.evaluations;
    const double ds = (u + v) / std::sqrt(2.0);
    const double di = (u - v) / std::sqrt(2.0);
    return std::norm(amp(c.omega0 + ds, c.omega0 + di));
  };

  if (spec.scheme == FrequencyScheme::TensorGauss) {
    const int panels = std::max(1, (spec.frequency_points + kPanelPoints - 1) / kPanelPoints);
    const auto ru = panel_rule(span * win.core_u, reach_u, panels);
    const auto rv = panel_rule(span * win.core_v, reach_v, panels);
    double total = 0.0;
    for (std::size_t j = 0; j < rv.nodes.size(); ++j) {
      double row = 0.0;
      for (std::size_t i = 0; i < ru.nodes.size(); ++i) row += ru.weights[i] * density(ru.nodes[i], rv.nodes[j]);
      total += rv.weights[j] * row;
    }
    est.value = total;
  } else {
    using boost::math::quadrature::gauss_kronrod;
    const double tol = 0.1 * spec.tolerance;
    auto inner = [&](double v) {
      return gauss_kronrod<double, 15>::integrate([&](double u) { return density(u, v); }, -reach_u, reach_u, 12,
                                                  tol);
    };
    est.value = gauss_kronrod<double, 15>::integrate(inner, -reach_v, reach_v, 12, tol);
  }
  est.refined = est.value;
  return est;
}

}  // namespace

ProbabilityEstimate probability_numeric_estimate(const SetupParams& setup, const OpticalConstants& c,
                                                 const ExpansionOrder2& expansion, const QuadratureSpec& spec,
                                                 const OracleModel& model) {
  setup.validate();
  spec.validate();
  auto est = integrate_probability(setup, c, expansion, spec, model);
  if (spec.verify) {
    const auto fine = integrate_probability(setup, c, expansion, spec.refined(), model);
    est.refined = fine.value;
    est.evaluations += fine.evaluations;
    est.relative_change = std::abs(fine.value - est.value) / std::abs(fine.value);
    if (!(est.relative_change <= spec.tolerance)) {
      std::ostringstream msg;
      msg << "probability quadrature not converged: " << est.value << " vs refined " << fine.value
          << " (relative change " << est.relative_change << ")";
      throw NumericalError(msg.str(), est.value, fine.value);
    }
  }
  return est;
}

double probability_numeric(const SetupParams& setup, const OpticalConstants& c, const ExpansionOrder2& expansion,
                           const QuadratureSpec& spec, const OracleModel& model) {
  return probability_numeric_estimate(setup, c, expansion, spec, model).value;
}

}  // namespace spdc
