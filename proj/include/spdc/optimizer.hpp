#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spdc/oracle.hpp"

namespace spdc {

enum class Objective { Analytic, Numeric };

struct Bounds {
  double L_min = 0.05e-3;
  double L_max = 20e-3;
  double w_min = 5e-6;
  double w_max = 500e-6;
  double wp_min = 5e-6;
  double wp_max = 300e-6;

  void validate() const;
};

// Everything needed to evaluate p(L, w, w_P) at the optimal offset h.
struct ProbabilityModel {
  OpticalConstants constants;
  ExpansionOrder2 expansion;  // used by the numeric objective only
  double sigma_pump = 0.0;
  double sigma_filter = 0.0;
  QuadratureSpec quadrature;
  OracleModel oracle;

  SetupParams setup(double L, double w, double w_pump) const;
  // Coupling probability at h = optimal_h. The numeric objective skips the
  // refinement check unless `verify` is set.
  double probability(Objective objective, double L, double w, double w_pump, bool verify = false) const;
};

struct OptimizationResult {
  double L = 0.0;
  double w = 0.0;
  double w_pump = 0.0;
  double h = 0.0;
  double p_max = 0.0;
  long evaluations = 0;
  bool converged = false;
  std::string diagnostics;
};

struct NelderMeadOptions {
  double x_tolerance = 1e-5;  // simplex diameter in the (log) search coordinates
  double f_tolerance = 1e-12; // relative spread of the simplex values
  int max_evaluations = 4000;
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  long evaluations = 0;
  bool converged = false;
};

// Minimizes f from x0 with initial edge lengths `step` along each axis.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0, const std::vector<double>& step,
                             const NelderMeadOptions& options = {});

struct OptimizeOptions {
  // Relative parameter tolerance of the reported argmax.
  double tolerance = 1e-3;
  // Starting points (L, w); empty selects four deterministic starts spanning the bounds.
  std::vector<std::pair<double, double>> starts;
};

// Maximizes p over (L, w) at fixed w_P with h = optimal_h. An argmax on the
// boundary is returned with converged = false and a diagnostic.
OptimizationResult optimize_Lw(const ProbabilityModel& model, double w_pump, Objective objective,
                               const Bounds& bounds = {}, const OptimizeOptions& options = {});

struct LinearFit {
  double intercept = 0.0;  // m
  double slope = 0.0;
  double residual_rms = 0.0;  // m
  int points = 0;
};

// Ordinary least squares y = intercept + slope x; needs at least 8 points.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

struct OptimumLines {
  LinearFit w_opt;
  LinearFit L_opt;
  std::vector<OptimizationResult> optima;  // converged points used in the fits
  std::vector<double> excluded;            // w_P values whose optimization did not converge
};

// Uniform grid of `count` pump waists over [10, 300] um.
std::vector<double> default_fit_grid(int count = 30);

OptimumLines fit_optimum_lines(const ProbabilityModel& model, const std::vector<double>& w_pump_grid,
                               Objective objective, const Bounds& bounds = {});

// Where (L, w) comes from at each trial w_P: the analytic optimum, or an
// optimization of the same objective that is being maximized over w_P.
enum class InnerOptimum { Analytic, SameObjective };

// Maximizes p(w_P; L_opt(w_P), w_opt(w_P)) over w_P within the bounds.
OptimizationResult find_global_wp(const ProbabilityModel& model, Objective objective, const Bounds& bounds = {},
                                  InnerOptimum inner = InnerOptimum::Analytic);

}  // namespace spdc
