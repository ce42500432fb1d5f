#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "spdc/expansion.hpp"

namespace spdc {

// Longitudinal factor of the pair amplitude: the exact L sinc(L delta_- / 2),
// or its Gaussian stand-in L exp(-(L delta_- / 2)^2 / 4).
enum class LongitudinalProfile { Sinc, Gaussian };

// How the 4-D transverse integral is done. ClosedForm writes the longitudinal
// factor as an integral over z inside the crystal; for a quadratic delta the
// transverse integral is then a complex Gaussian at every z. Tensor is a direct
// 4-D Gauss-Legendre product rule on the integrand.
enum class TransverseMethod { ClosedForm, Tensor };

// Frequency-plane rule for the probability: composite Gauss-Legendre panels in
// the sum/difference coordinates, or nested adaptive Gauss-Kronrod.
enum class FrequencyScheme { TensorGauss, Adaptive };

struct QuadratureSpec {
  int transverse_points = 32;     // per axis, Tensor method
  double transverse_span = 5.0;   // in units of the fiber-mode width sqrt(2)/w
  int frequency_points = 48;      // per axis across +-span core widths
  double frequency_span = 4.0;    // in marginal widths of the analytic spectrum
  int longitudinal_points = 48;   // minimum z nodes; raised for oscillatory phases
  FrequencyScheme scheme = FrequencyScheme::TensorGauss;
  TransverseMethod transverse = TransverseMethod::ClosedForm;
  double tolerance = 5e-3;        // relative change accepted under refinement
  bool verify = true;             // refine and compare in probability_numeric

  void validate() const;
  QuadratureSpec refined() const;  // all point counts doubled
};

struct OracleModel {
  LongitudinalProfile profile = LongitudinalProfile::Sinc;
  bool second_order = true;  // keep the Hessian terms (diffraction, quadratic phases)
  // Tensor method only: evaluate exact delta_pm in the integrand instead of the expansion.
  std::optional<Crystal> full_dispersion;

  // Gaussian profile with the quadratic terms dropped: the chain of
  // approximations behind the closed-form model.
  static OracleModel gaussian_reduction() { return {LongitudinalProfile::Gaussian, false, std::nullopt}; }
};

// Coupled pair amplitude psi(omega_s, omega_i) for one configuration. Construct
// once, evaluate many times; const evaluation is thread-safe.
class CoupledAmplitude {
 public:
  // max_detuning bounds |omega - omega0| over the points that will be evaluated;
  // it sets the number of z nodes.
  CoupledAmplitude(const SetupParams& setup, const OpticalConstants& c, const ExpansionOrder2& expansion,
                   const QuadratureSpec& spec, const OracleModel& model, double max_detuning);

  std::complex<double> operator()(double omega_s, double omega_i) const;
  int longitudinal_nodes() const { return static_cast<int>(nodes_.size()); }

 private:
  using Matrix4c = Eigen::Matrix<std::complex<double>, 4, 4>;
  using Vector4c = Eigen::Matrix<std::complex<double>, 4, 1>;

  struct ZNode {
    double z;
    double weight;
    Matrix4c a_inv;
    std::complex<double> inv_sqrt_det;
    Eigen::Vector4d q_k;                   // linear k coefficients of the phase
    Eigen::Matrix<double, 4, 2> p_kw;      // k-omega block of the phase Hessian
    Eigen::Vector2d q_w;
    Eigen::Matrix2d p_ww;
  };

  std::complex<double> closed_form(double ds, double di) const;
  std::complex<double> tensor(double ds, double di) const;
  double spectral_envelope(double ds, double di) const;

  SetupParams setup_;
  OpticalConstants c_;
  ExpansionOrder2 expansion_;
  QuadratureSpec spec_;
  OracleModel model_;
  double theta_s_;
  double theta_i_;
  std::vector<ZNode> nodes_;
};

// |psi| from the numeric oracle, relative units matching jsa_analytic.
double jsa_numeric(double omega_s, double omega_i, const SetupParams& setup, const OpticalConstants& c,
                   const ExpansionOrder2& expansion, const QuadratureSpec& spec = {},
                   const OracleModel& model = {});

struct ProbabilityEstimate {
  double value = 0.0;
  double refined = 0.0;  // equal to value when not verified
  double relative_change = 0.0;
  long evaluations = 0;
};

// Integral of |psi|^2 over (omega_s, omega_i). With spec.verify the result is
// recomputed with spec.refined() and NumericalError is thrown (carrying both
// estimates) when they differ by more than spec.tolerance.
ProbabilityEstimate probability_numeric_estimate(const SetupParams& setup, const OpticalConstants& c,
                                                 const ExpansionOrder2& expansion, const QuadratureSpec& spec = {},
                                                 const OracleModel& model = {});
double probability_numeric(const SetupParams& setup, const OpticalConstants& c, const ExpansionOrder2& expansion,
                           const QuadratureSpec& spec = {}, const OracleModel& model = {});

}  // namespace spdc
