#include "spdc/scan.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <thread>

#include "spdc/errors.hpp"
#include "spdc/version.hpp"

namespace spdc {

namespace {

// Rethrows library errors with the module name prefixed.
template <class F>
auto in_module(const char* module, F&& f) -> decltype(f()) {
  const std::string prefix = std::string(module) + ": ";
  try {
    return f();
  } catch (const NumericalError& e) {
    throw NumericalError(prefix + e.what(), e.coarse_estimate(), e.fine_estimate());
  } catch (const PhaseMatchingError& e) {
    throw PhaseMatchingError(prefix + e.what());
  } catch (const DomainError& e) {
    throw DomainError(prefix + e.what());
  }
}

// Evaluates f(0..n-1) on worker threads; results keep index order.
template <class T, class F>
std::vector<T> parallel_map(int n, int threads, F&& f) {
  std::vector<T> out(n);
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, std::max(n, 1));
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (int k = next++; k < n && !failed; k = next++) {
      try {
        out[k] = f(k);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

std::string fmt(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

bool wants_numeric(OracleChoice o) { return o != OracleChoice::Analytic; }
bool wants_analytic(OracleChoice o) { return o != OracleChoice::Numeric; }

struct Context {
  const RunConfig& config;
  PreparedCrystal prepared;
  ProbabilityModel model;
  double p_reference = 0.0;
};

Context make_context(const RunConfig& config) {
  Context ctx{config, prepare_crystal(config), {}, 0.0};
  auto& m = ctx.model;
  m.constants = ctx.prepared.constants;
  m.sigma_pump = spectral_sigma(config.pump_width, 0.5 * config.wavelength, config.convention);
  m.sigma_filter = spectral_sigma(config.filter_width, config.wavelength, config.convention);
  m.quadrature = config.quadrature;
  m.oracle = config.oracle_model;
  const bool numeric = wants_numeric(config.oracle) &&
                       (config.task == Task::JsaGrid || config.task == Task::ScanLength ||
                        config.task == Task::ScanWaist || config.task == Task::Optimize);
  if (numeric) {
    m.expansion =
        in_module("numeric-oracle", [&] { return expand_delta_order2(ctx.prepared.crystal, m.constants); });
  }
  ctx.p_reference = in_module("pdc-model", [&] {
    return m.probability(Objective::Analytic, config.reference_L, config.reference_w, config.reference_w_pump);
  });
  return ctx;
}

nlohmann::ordered_json base_metadata(const Context& ctx) {
  nlohmann::ordered_json md;
  md["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : ctx.config.resolved()) cfg[k] = v;
  md["config"] = cfg;
  md["crystal"] = ctx.prepared.crystal.sellmeier.name();
  md["constants"] = constants_json(ctx.prepared.constants);
  md["spectral_sigma"] = {{"pump_rad_per_s", ctx.model.sigma_pump}, {"filter_rad_per_s", ctx.model.sigma_filter}};
  md["normalization"] = {{"quantity", "analytic probability at the optimal offset h"},
                         {"L_m", ctx.config.reference_L},
                         {"w_m", ctx.config.reference_w},
                         {"w_pump_m", ctx.config.reference_w_pump},
                         {"p_reference", ctx.p_reference}};
  return md;
}

// One probability row: analytic and/or numeric at the optimal offset.
struct ProbabilityRow {
  double h = 0.0;
  double analytic = 0.0;
  double numeric = 0.0;
  double numeric_change = 0.0;
  bool long_rayleigh = true;
};

ProbabilityRow probability_row(const Context& ctx, double L, double w, double w_pump) {
  const auto& m = ctx.model;
  const SetupParams s = in_module("pdc-model", [&] { return m.setup(L, w, w_pump); });
  ProbabilityRow r;
  r.h = s.h;
  r.long_rayleigh = rayleigh_diagnostic(s, ctx.prepared.crystal, m.constants).long_rayleigh;
  if (wants_analytic(ctx.config.oracle)) {
    r.analytic = in_module("pdc-model", [&] { return total_probability(s, m.constants); }) / ctx.p_reference;
  }
  if (wants_numeric(ctx.config.oracle)) {
    const auto est =
        in_module("numeric-oracle", [&] { return probability_numeric_estimate(s, m.constants, m.expansion, m.quadrature, m.oracle); });
    r.numeric = est.value / ctx.p_reference;
    r.numeric_change = est.relative_change;
  }
  return r;
}

void probability_columns(const RunConfig& config, std::vector<std::string>& cols) {
  cols.push_back("h_m");
  if (wants_analytic(config.oracle)) cols.push_back("p_analytic");
  if (wants_numeric(config.oracle)) {
    cols.push_back("p_numeric");
    cols.push_back("numeric_refinement_change");
  }
  if (config.oracle == OracleChoice::Both) cols.push_back("relative_difference");
  cols.push_back("long_rayleigh");
}

void append_probability(const RunConfig& config, const ProbabilityRow& r, std::vector<Cell>& row) {
  row.emplace_back(r.h);
  if (wants_analytic(config.oracle)) row.emplace_back(r.analytic);
  if (wants_numeric(config.oracle)) {
    row.emplace_back(r.numeric);
    row.emplace_back(r.numeric_change);
  }
  if (config.oracle == OracleChoice::Both) row.emplace_back((r.numeric - r.analytic) / r.analytic);
  row.emplace_back(static_cast<long long>(r.long_rayleigh));
}

void rayleigh_warning(const std::vector<ProbabilityRow>& rows, ScanResult& out) {
  int short_count = 0;
  for (const auto& r : rows) short_count += r.long_rayleigh ? 0 : 1;
  if (short_count > 0) {
    out.warnings.push_back(std::to_string(short_count) +
                           " point(s) have a Rayleigh range below 10 L; the closed-form model assumes long "
                           "Rayleigh ranges there");
  }
}

nlohmann::ordered_json peak_summary(const std::vector<double>& x, const std::vector<ProbabilityRow>& rows,
                                    const RunConfig& config, const char* name) {
  nlohmann::ordered_json s;
  auto peak = [&](auto get) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < rows.size(); ++k) {
      if (get(rows[k]) > get(rows[best])) best = k;
    }
    return nlohmann::ordered_json{{name, x[best]}, {"p", get(rows[best])}};
  };
  if (wants_analytic(config.oracle)) s["analytic_peak"] = peak([](const ProbabilityRow& r) { return r.analytic; });
  if (wants_numeric(config.oracle)) s["numeric_peak"] = peak([](const ProbabilityRow& r) { return r.numeric; });
  return s;
}

void task_constants(const Context& ctx, ScanResult& out) {
  const auto& c = ctx.prepared.constants;
  out.columns = {"name", "value", "unit"};
  auto row = [&](const char* n, double v, const char* u) {
    out.rows.push_back({std::string(n), v, std::string(u)});
  };
  row("omega0", c.omega0, "rad/s");
  row("theta0", c.theta0, "rad");
  row("theta0_internal", c.theta0_int, "rad");
  row("alpha", c.alpha, "rad");
  row("gamma", c.gamma, "rad");
  row("dbeta_minus_z", c.dbeta_minus_z, "s/m");
  row("dbeta_plus_z", c.dbeta_plus_z, "s/m");
  row("n_o_degenerate", c.n_o_deg, "1");
  row("axis_plane_angle", c.axis_plane_angle, "rad");
  out.summary["constants"] = constants_json(c);
}

void task_jsa(const Context& ctx, ScanResult& out) {
  const auto& cfg = ctx.config;
  const auto& m = ctx.model;
  SetupParams s = m.setup(cfg.L, cfg.w, cfg.w_pump);
  if (cfg.h) s.h = *cfg.h;
  const int n = cfg.jsa_points;
  std::vector<double> lambdas(n);
  for (int k = 0; k < n; ++k) lambdas[k] = cfg.wavelength + cfg.jsa_span * (static_cast<double>(k) / (n - 1) - 0.5);
  double max_detuning = 0.0;
  for (double l : lambdas) max_detuning = std::max(max_detuning, std::abs(angular_frequency(l) - m.constants.omega0));

  const double peak = in_module("pdc-model", [&] {
    const double a = jsa_analytic(m.constants.omega0, m.constants.omega0, s, m.constants);
    return a * a;
  });
  std::optional<CoupledAmplitude> amp;
  if (wants_numeric(cfg.oracle)) {
    amp.emplace(in_module("numeric-oracle", [&] {
      return CoupledAmplitude(s, m.constants, m.expansion, m.quadrature, m.oracle, max_detuning);
    }));
  }

  out.columns = {"lambda_s_m", "lambda_i_m", "lambda_s_nm", "lambda_i_nm", "omega_s_rad_per_s", "omega_i_rad_per_s"};
  if (wants_analytic(cfg.oracle)) out.columns.push_back("intensity_analytic");
  if (wants_numeric(cfg.oracle)) out.columns.push_back("intensity_numeric");

  out.rows = parallel_map<std::vector<Cell>>(n * n, cfg.threads, [&](int idx) {
    const double ls = lambdas[idx / n];
    const double li = lambdas[idx % n];
    const double ws = angular_frequency(ls);
    const double wi = angular_frequency(li);
    std::vector<Cell> row{ls, li, ls * 1e9, li * 1e9, ws, wi};
    if (wants_analytic(cfg.oracle)) {
      const double a = in_module("pdc-model", [&] { return jsa_analytic(ws, wi, s, m.constants); });
      row.emplace_back(a * a / peak);
    }
    if (amp) row.emplace_back(std::norm(in_module("numeric-oracle", [&] { return (*amp)(ws, wi); })) / peak);
    return row;
  });
  out.summary["grid"] = {{"points_per_axis", n}, {"span_m", cfg.jsa_span}, {"h_m", s.h}};
  out.summary["normalization"] = "analytic |psi|^2 at the degenerate point";
}

void task_scan_length(const Context& ctx, ScanResult& out) {
  const auto& cfg = ctx.config;
  const auto xs = cfg.scan.values();
  const auto rows = parallel_map<ProbabilityRow>(static_cast<int>(xs.size()), cfg.threads,
                                                 [&](int k) { return probability_row(ctx, xs[k], cfg.w, cfg.w_pump); });
  out.columns = {"L_m", "L_mm"};
  probability_columns(cfg, out.columns);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    std::vector<Cell> row{xs[k], xs[k] * 1e3};
    append_probability(cfg, rows[k], row);
    out.rows.push_back(std::move(row));
  }
  rayleigh_warning(rows, out);
  out.summary = peak_summary(xs, rows, cfg, "L_m");
}

struct WaistPoint {
  double w_pump, w, L;
};

WaistPoint waist_point(const Context& ctx, double value) {
  const auto& cfg = ctx.config;
  switch (cfg.waist_mode) {
    case WaistMode::Equal:
      return {value, value, cfg.L};
    case WaistMode::Pump:
      return {value, cfg.w, cfg.L};
    case WaistMode::Fiber:
      return {cfg.w_pump, value, cfg.L};
    case WaistMode::Optimal: {
      const auto r = in_module("optimizer", [&] { return optimize_Lw(ctx.model, value, Objective::Analytic, cfg.bounds); });
      return {value, r.w, r.L};
    }
  }
  return {value, value, cfg.L};
}

void task_scan_waist(const Context& ctx, ScanResult& out) {
  const auto& cfg = ctx.config;
  const auto xs = cfg.scan.values();
  const int n = static_cast<int>(xs.size());
  const auto points = parallel_map<WaistPoint>(n, cfg.threads, [&](int k) { return waist_point(ctx, xs[k]); });
  const auto rows = parallel_map<ProbabilityRow>(n, cfg.threads, [&](int k) {
    return probability_row(ctx, points[k].L, points[k].w, points[k].w_pump);
  });
  out.columns = {"w_pump_m", "w_pump_um", "w_m", "w_um", "L_m", "L_mm"};
  probability_columns(cfg, out.columns);
  for (int k = 0; k < n; ++k) {
    const auto& p = points[k];
    std::vector<Cell> row{p.w_pump, p.w_pump * 1e6, p.w, p.w * 1e6, p.L, p.L * 1e3};
    append_probability(cfg, rows[k], row);
    out.rows.push_back(std::move(row));
  }
  rayleigh_warning(rows, out);
  out.summary = peak_summary(xs, rows, cfg, "scan_value_m");
}

void task_separability(const Context& ctx, ScanResult& out) {
  const auto& cfg = ctx.config;
  const auto xs = cfg.scan.values();
  out.columns = {"w_pump_m", "w_pump_um", "w_m", "w_um", "L_m", "separability_ratio", "residual_s2",
                 "omega_ss_s2", "omega_ii_s2", "omega_si_s2"};
  double best_ratio = 0.0;
  double best_x = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const auto p = waist_point(ctx, xs[k]);
    const SetupParams s = ctx.model.setup(p.L, p.w, p.w_pump);
    const auto [ratio, residual, om] = in_module("pdc-model", [&] {
      return std::tuple{separability_ratio(s, ctx.model.constants), separability_residual(s, ctx.model.constants),
                        spectrum_matrix(s, ctx.model.constants, SpectrumForm::SmallAngle)};
    });
    out.rows.push_back({p.w_pump, p.w_pump * 1e6, p.w, p.w * 1e6, p.L, ratio, residual, om.ss, om.ii, om.si});
    if (k == 0 || ratio < best_ratio) {
      best_ratio = ratio;
      best_x = xs[k];
    }
  }
  out.summary["most_separable"] = {{"scan_value_m", best_x}, {"separability_ratio", best_ratio}};
}

std::vector<Cell> optimum_row(const OptimizationResult& r, double p_reference) {
  return {r.w_pump, r.w_pump * 1e6, r.L, r.L * 1e3, r.w, r.w * 1e6, r.h, r.p_max / p_reference,
          static_cast<long long>(r.converged), static_cast<long long>(r.evaluations), r.diagnostics};
}

nlohmann::ordered_json optimum_json(const OptimizationResult& r, double p_reference) {
  return {{"w_pump_m", r.w_pump}, {"L_m", r.L},          {"w_m", r.w},
          {"h_m", r.h},           {"p_max", r.p_max / p_reference},
          {"converged", r.converged}, {"evaluations", r.evaluations}, {"diagnostics", r.diagnostics}};
}

nlohmann::ordered_json fit_json(const LinearFit& f) {
  return {{"intercept_m", f.intercept}, {"slope", f.slope}, {"residual_rms_m", f.residual_rms}, {"points", f.points}};
}

void task_optimize(const Context& ctx, ScanResult& out) {
  const auto& cfg = ctx.config;
  const Objective objective = cfg.oracle == OracleChoice::Numeric ? Objective::Numeric : Objective::Analytic;
  out.columns = {"w_pump_m", "w_pump_um", "L_m", "L_mm", "w_m", "w_um", "h_m", "p_max", "converged",
                 "evaluations", "diagnostics"};
  switch (cfg.optimize_mode) {
    case OptimizeMode::Lw: {
      const auto r = in_module("optimizer", [&] { return optimize_Lw(ctx.model, cfg.w_pump, objective, cfg.bounds); });
      out.rows.push_back(optimum_row(r, ctx.p_reference));
      out.summary["optimum"] = optimum_json(r, ctx.p_reference);
      break;
    }
    case OptimizeMode::Fit: {
      std::vector<double> grid(cfg.fit_points);
      for (int k = 0; k < cfg.fit_points; ++k) {
        grid[k] = cfg.fit_min + (cfg.fit_max - cfg.fit_min) * k / (cfg.fit_points - 1);
      }
      const auto optima = parallel_map<OptimizationResult>(cfg.fit_points, cfg.threads, [&](int k) {
        return in_module("optimizer", [&] { return optimize_Lw(ctx.model, grid[k], objective, cfg.bounds); });
      });
      std::vector<double> wp, wopt, lopt;
      nlohmann::ordered_json excluded = nlohmann::ordered_json::array();
      for (const auto& r : optima) {
        out.rows.push_back(optimum_row(r, ctx.p_reference));
        if (!r.converged) {
          excluded.push_back(r.w_pump);
          continue;
        }
        wp.push_back(r.w_pump);
        wopt.push_back(r.w);
        lopt.push_back(r.L);
      }
      const auto [fw, fl] = in_module("optimizer", [&] { return std::pair{linear_fit(wp, wopt), linear_fit(wp, lopt)}; });
      out.summary["fit_region_m"] = {cfg.fit_min, cfg.fit_max};
      out.summary["w_opt"] = fit_json(fw);
      out.summary["L_opt"] = fit_json(fl);
      out.summary["excluded_w_pump_m"] = excluded;
      break;
    }
    case OptimizeMode::Global: {
      const auto r = in_module("optimizer", [&] { return find_global_wp(ctx.model, objective, cfg.bounds, cfg.inner); });
      out.rows.push_back(optimum_row(r, ctx.p_reference));
      out.summary["optimum"] = optimum_json(r, ctx.p_reference);
      break;
    }
  }
  for (const auto& row : out.rows) {
    if (std::get<long long>(row[8]) == 0) {
      out.warnings.push_back("optimization at w_pump = " + fmt(std::get<double>(row[0])) +
                             " m did not converge: " + std::get<std::string>(row[10]));
    }
  }
}

std::string csv_field(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) throw NumericalError("non-finite value in output");
    return fmt(*d);
  }
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

}  // namespace

nlohmann::ordered_json constants_json(const OpticalConstants& c) {
  return {{"omega0_rad_per_s", c.omega0},     {"theta0_rad", c.theta0},
          {"theta0_internal_rad", c.theta0_int}, {"alpha_rad", c.alpha},
          {"gamma_rad", c.gamma},             {"dbeta_minus_z_s_per_m", c.dbeta_minus_z},
          {"dbeta_plus_z_s_per_m", c.dbeta_plus_z}, {"n_o_degenerate", c.n_o_deg},
          {"axis_plane_angle_rad", c.axis_plane_angle}};
}

PreparedCrystal prepare_crystal(const RunConfig& config) {
  const SellmeierSet s = [&] {
    try {
      return load_sellmeier(config.constants_path);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("crystal constants: ") + e.what());
    }
  }();
  return in_module("crystal-optics", [&] {
    if (config.theta0) {
      const Crystal crystal = phase_matched_crystal(s, config.wavelength, *config.theta0, config.axis_plane_angle);
      return PreparedCrystal{crystal, derive_constants(s, crystal.cut, config.wavelength, *config.theta0)};
    }
    CrystalCut cut{*config.alpha, config.axis_plane_angle};
    return PreparedCrystal{Crystal{s, cut}, derive_constants(s, cut, config.wavelength)};
  });
}

ScanResult run(const RunConfig& config) {
  config.validate();
  const Context ctx = make_context(config);
  ScanResult out;
  out.metadata = base_metadata(ctx);
  switch (config.task) {
    case Task::Constants:
      task_constants(ctx, out);
      break;
    case Task::JsaGrid:
      task_jsa(ctx, out);
      break;
    case Task::ScanLength:
      task_scan_length(ctx, out);
      break;
    case Task::ScanWaist:
      task_scan_waist(ctx, out);
      break;
    case Task::Separability:
      task_separability(ctx, out);
      break;
    case Task::Optimize:
      task_optimize(ctx, out);
      break;
  }
  return out;
}

std::string to_csv(const ScanResult& result) {
  std::string out;
  for (std::size_t k = 0; k < result.columns.size(); ++k) {
    out += (k ? "," : "") + csv_field(result.columns[k]);
  }
  out += "\r\n";
  for (const auto& row : result.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out += (k ? "," : "") + csv_field(row[k]);
    out += "\r\n";
  }
  return out;
}

std::string to_json(const ScanResult& result) {
  nlohmann::ordered_json j;
  j["metadata"] = result.metadata;
  j["columns"] = result.columns;
  j["records"] = result.rows.size();
  j["summary"] = result.summary.is_null() ? nlohmann::ordered_json::object() : result.summary;
  j["warnings"] = result.warnings;
  return j.dump(2) + "\n";
}

OutputPaths write_outputs(const ScanResult& result, const RunConfig& config, const std::filesystem::path& out_dir) {
  // Serialize both before touching the filesystem so a failure leaves no files.
  const std::string csv = to_csv(result);
  const std::string json = to_json(result);
  OutputPaths p{out_dir / config.csv_path, out_dir / config.json_path};
  for (const auto& [path, text] : {std::pair{p.csv, csv}, std::pair{p.json, json}}) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << text)) throw std::runtime_error("cannot write '" + path.string() + "'");
  }
  return p;
}

}  // namespace spdc
