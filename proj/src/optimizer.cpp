#include "spdc/optimizer.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "spdc/errors.hpp"

namespace spdc {

void Bounds::validate() const {
  auto check = [](double lo, double hi, const char* name) {
    if (!(lo > 0.0 && hi > lo)) throw DomainError(std::string("bounds: need 0 < min < max for ") + name);
  };
  check(L_min, L_max, "L");
  check(w_min, w_max, "w");
  check(wp_min, wp_max, "w_pump");
}

SetupParams ProbabilityModel::setup(double L, double w, double w_pump) const {
  SetupParams s;
  s.L = L;
  s.w = w;
  s.w_pump = w_pump;
  s.sigma_pump = sigma_pump;
  s.sigma_filter = sigma_filter;
  s.h = optimal_h(s, constants);
  return s;
}

double ProbabilityModel::probability(Objective objective, double L, double w, double w_pump, bool verify) const {
  const SetupParams s = setup(L, w, w_pump);
  if (objective == Objective::Analytic) return total_probability(s, constants);
  QuadratureSpec q = quadrature;
  q.verify = verify;
  return probability_numeric(s, constants, expansion, q, oracle);
}

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0, const std::vector<double>& step,
                             const NelderMeadOptions& options) {
  const std::size_t n = x0.size();
  if (n == 0 || step.size() != n) throw DomainError("nelder_mead: dimension mismatch");
  NelderMeadResult out;
  auto eval = [&](const std::vector<double>& x) {
    ++out.evaluations;
    return f(x);
  };

  std::vector<std::vector<double>> simplex(n + 1, x0);
  std::vector<double> fv(n + 1);
  for (std::size_t k = 0; k < n; ++k) simplex[k + 1][k] += step[k];
  for (std::size_t k = 0; k <= n; ++k) fv[k] = eval(simplex[k]);

  std::vector<std::size_t> order(n + 1);
  auto point = [n](const std::vector<double>& a, const std::vector<double>& b, double t) {
    std::vector<double> x(n);
    for (std::size_t k = 0; k < n; ++k) x[k] = a[k] + t * (b[k] - a[k]);
    return x;
  };

  while (out.evaluations < options.max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[n - 1];

    double diameter = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
      for (std::size_t d = 0; d < n; ++d) diameter = std::max(diameter, std::abs(simplex[k][d] - simplex[best][d]));
    }
    const double spread = std::abs(fv[worst] - fv[best]);
    if (diameter < options.x_tolerance &&
        spread <= options.f_tolerance * std::max(std::abs(fv[best]), std::numeric_limits<double>::min())) {
      out.converged = true;
      break;
    }
    if (diameter < 1e-3 * options.x_tolerance) {
      // Flat objective: the simplex has collapsed below any useful resolution.
      out.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t k = 0; k <= n; ++k) {
      if (k == worst) continue;
      for (std::size_t d = 0; d < n; ++d) centroid[d] += simplex[k][d] / n;
    }
    const auto xr = point(centroid, simplex[worst], -1.0);
    const double fr = eval(xr);
    if (fr < fv[best]) {
      const auto xe = point(centroid, simplex[worst], -2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        fv[worst] = fe;
      } else {
        simplex[worst] = xr;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      simplex[worst] = xr;
      fv[worst] = fr;
      continue;
    }
    const bool outside = fr < fv[worst];
    const auto xc = outside ? point(centroid, xr, 0.5) : point(centroid, simplex[worst], 0.5);
    const double fc = eval(xc);
    if (fc < (outside ? fr : fv[worst])) {
      simplex[worst] = xc;
      fv[worst] = fc;
      continue;
    }
    for (std::size_t k = 0; k <= n; ++k) {
      if (k == best) continue;
      simplex[k] = point(simplex[best], simplex[k], 0.5);
      fv[k] = eval(simplex[k]);
    }
  }
  const auto it = std::min_element(fv.begin(), fv.end());
  out.x = simplex[it - fv.begin()];
  out.f = *it;
  return out;
}

namespace {

// Within this distance (in log coordinates) of a bound the argmax counts as on the boundary.
constexpr double kBoundaryMargin = 1e-3;

bool near_bound(double x, double lo, double hi) {
  return std::log(x / lo) < kBoundaryMargin || std::log(hi / x) < kBoundaryMargin;
}

std::vector<std::pair<double, double>> default_starts(const Bounds& b) {
  auto at = [](double lo, double hi, double t) { return lo * std::pow(hi / lo, t); };
  std::vector<std::pair<double, double>> s;
  for (double tl : {0.3, 0.7}) {
    for (double tw : {0.3, 0.7}) s.emplace_back(at(b.L_min, b.L_max, tl), at(b.w_min, b.w_max, tw));
  }
  return s;
}

}  // namespace

OptimizationResult optimize_Lw(const ProbabilityModel& model, double w_pump, Objective objective,
                               const Bounds& bounds, const OptimizeOptions& options) {
  bounds.validate();
  if (!(w_pump > 0.0)) throw DomainError("optimize_Lw: w_pump must be positive");
  const auto starts = options.starts.empty() ? default_starts(bounds) : options.starts;

  OptimizationResult best;
  best.w_pump = w_pump;
  best.p_max = -std::numeric_limits<double>::infinity();
  auto objective_fn = [&](const std::vector<double>& x) {
    const double L = std::exp(x[0]);
    const double w = std::exp(x[1]);
    if (L < bounds.L_min || L > bounds.L_max || w < bounds.w_min || w > bounds.w_max) {
      return std::numeric_limits<double>::infinity();
    }
    ++best.evaluations;
    const double p = model.probability(objective, L, w, w_pump);
    // The best evaluated point is the reported argmax.
    if (p > best.p_max) {
      best.p_max = p;
      best.L = L;
      best.w = w;
    }
    return -p;
  };

  NelderMeadOptions nm;
  nm.x_tolerance = 0.1 * options.tolerance;
  bool all_converged = true;
  for (const auto& [L0, w0] : starts) {
    const double L = std::clamp(L0, bounds.L_min, bounds.L_max);
    const double w = std::clamp(w0, bounds.w_min, bounds.w_max);
    // Initial edges point into the box.
    const double sL = std::log(L / bounds.L_min) > 0.3 ? -0.3 : 0.3;
    const double sw = std::log(w / bounds.w_min) > 0.3 ? -0.3 : 0.3;
    const auto r = nelder_mead(objective_fn, {std::log(L), std::log(w)}, {sL, sw}, nm);
    all_converged = all_converged && r.converged;
  }

  std::ostringstream diag;
  best.converged = all_converged;
  if (!all_converged) diag << "simplex did not reach tolerance within the evaluation budget; ";
  if (near_bound(best.L, bounds.L_min, bounds.L_max)) {
    best.converged = false;
    diag << "argmax L on the boundary; ";
  }
  if (near_bound(best.w, bounds.w_min, bounds.w_max)) {
    best.converged = false;
    diag << "argmax w on the boundary; ";
  }
  best.h = model.setup(best.L, best.w, w_pump).h;
  if (objective == Objective::Numeric && model.quadrature.verify) {
    // Confirms the quadrature at the argmax; throws NumericalError otherwise.
    model.probability(objective, best.L, best.w, w_pump, true);
  }
  best.diagnostics = diag.str();
  if (!best.diagnostics.empty()) best.diagnostics.resize(best.diagnostics.size() - 2);
  return best;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DomainError("linear_fit: size mismatch");
  if (x.size() < 8) throw DomainError("linear_fit: need at least 8 points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("linear_fit: abscissae are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double r = y[k] - (fit.intercept + fit.slope * x[k]);
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / n);
  fit.points = static_cast<int>(x.size());
  return fit;
}

std::vector<double> default_fit_grid(int count) {
  if (count < 2) throw DomainError("fit grid needs at least two points");
  std::vector<double> g(count);
  for (int k = 0; k < count; ++k) g[k] = 10e-6 + (300e-6 - 10e-6) * k / (count - 1);
  return g;
}

OptimumLines fit_optimum_lines(const ProbabilityModel& model, const std::vector<double>& w_pump_grid,
                               Objective objective, const Bounds& bounds) {
  OptimumLines out;
  std::vector<double> wp;
  std::vector<double> wopt;
  std::vector<double> lopt;
  for (double w_pump : w_pump_grid) {
    const auto r = optimize_Lw(model, w_pump, objective, bounds);
    if (!r.converged) {
      out.excluded.push_back(w_pump);
      continue;
    }
    out.optima.push_back(r);
    wp.push_back(w_pump);
    wopt.push_back(r.w);
    lopt.push_back(r.L);
  }
  out.w_opt = linear_fit(wp, wopt);
  out.L_opt = linear_fit(wp, lopt);
  return out;
}

OptimizationResult find_global_wp(const ProbabilityModel& model, Objective objective, const Bounds& bounds,
                                  InnerOptimum inner) {
  bounds.validate();
  long evaluations = 0;
  auto inner_optimum = [&](double w_pump) {
    OptimizationResult r = optimize_Lw(model, w_pump, Objective::Analytic, bounds);
    evaluations += r.evaluations;
    if (inner == InnerOptimum::SameObjective && objective == Objective::Numeric) {
      OptimizeOptions o;
      o.starts = {{r.L, r.w}};
      r = optimize_Lw(model, w_pump, objective, bounds, o);
      evaluations += r.evaluations;
    }
    return r;
  };

  OptimizationResult best;
  best.p_max = -std::numeric_limits<double>::infinity();
  auto f = [&](double log_wp) {
    const double w_pump = std::exp(log_wp);
    const auto r = inner_optimum(w_pump);
    const double p = objective == Objective::Analytic || inner == InnerOptimum::SameObjective
                         ? r.p_max
                         : model.probability(objective, r.L, r.w, w_pump);
    ++evaluations;
    if (p > best.p_max) {
      best = r;
      best.p_max = p;
    }
    return -p;
  };

  boost::uintmax_t max_iter = 200;
  boost::math::tools::brent_find_minima(f, std::log(bounds.wp_min), std::log(bounds.wp_max), 20, max_iter);

  std::ostringstream diag;
  const bool inner_converged = best.converged;
  best.converged = max_iter < 200 && inner_converged;
  if (max_iter >= 200) diag << "bracket did not shrink to tolerance; ";
  if (!inner_converged) diag << "the inner (L, w) optimization at the argmax did not converge; ";
  if (near_bound(best.w_pump, bounds.wp_min, bounds.wp_max)) {
    best.converged = false;
    diag << "argmax w_pump on the boundary; ";
  }
  if (objective == Objective::Numeric && model.quadrature.verify) {
    model.probability(objective, best.L, best.w, best.w_pump, true);
  }
  best.evaluations = evaluations;
  best.diagnostics = diag.str();
  if (!best.diagnostics.empty()) best.diagnostics.resize(best.diagnostics.size() - 2);
  return best;
}

}  // namespace spdc
