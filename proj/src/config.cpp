#include "spdc/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include "json.hpp"
#include <sstream>

#include "spdc/errors.hpp"
#include "spdc/keyvalue.hpp"

namespace spdc {

namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t j = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > j) out.push_back(s.substr(j, i - j));
  }
  return out;
}

[[noreturn]] void fail(const std::string& key, const std::string& expected, std::string_view got) {
  throw ConfigError("key '" + key + "': expected " + expected + ", got '" + std::string(got) + "'");
}

const std::map<std::string, double, std::less<>>& length_units() {
  static const std::map<std::string, double, std::less<>> u{
      {"nm", 1e-9}, {"um", 1e-6}, {"\xC2\xB5m", 1e-6}, {"mm", 1e-3}, {"m", 1.0}};
  return u;
}

const std::map<std::string, double, std::less<>>& angle_units() {
  static const std::map<std::string, double, std::less<>> u{{"deg", units::deg}, {"rad", 1.0}};
  return u;
}

double with_unit(const std::string& key, std::string_view value,
                 const std::map<std::string, double, std::less<>>& table, const char* kind) {
  std::string forms;
  for (const auto& [name, factor] : table) forms += (forms.empty() ? "" : ", ") + name;
  const std::string expected = "'<number> <unit>' (" + std::string(kind) + " unit: " + forms + ")";
  const auto parts = split_ws(value);
  if (parts.size() != 2) fail(key, expected, value);
  const auto it = table.find(parts[1]);
  if (it == table.end()) fail(key, expected, value);
  double x = 0.0;
  try {
    x = parse_number(parts[0], key);
  } catch (const ConfigError&) {
    fail(key, expected, value);
  }
  return x * it->second;
}

double length(const std::string& key, std::string_view v) { return with_unit(key, v, length_units(), "length"); }
double angle(const std::string& key, std::string_view v) { return with_unit(key, v, angle_units(), "angle"); }

int integer(const std::string& key, std::string_view v) {
  int x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) fail(key, "an integer", v);
  return x;
}

double number(const std::string& key, std::string_view v) {
  try {
    return parse_number(v, key);
  } catch (const ConfigError&) {
    fail(key, "a plain number", v);
  }
}

bool boolean(const std::string& key, std::string_view v) {
  if (v == "true") return true;
  if (v == "false") return false;
  fail(key, "true or false", v);
}

template <class E>
E choice(const std::string& key, std::string_view v, const std::vector<std::pair<std::string, E>>& options) {
  std::string forms;
  for (const auto& [name, e] : options) {
    if (v == name) return e;
    forms += (forms.empty() ? "" : " | ") + name;
  }
  fail(key, "one of " + forms, v);
}

template <class E>
std::string name_of(E e, const std::vector<std::pair<std::string, E>>& options) {
  for (const auto& [name, x] : options) {
    if (x == e) return name;
  }
  return "?";
}

const std::vector<std::pair<std::string, Task>> kTasks{
    {"constants", Task::Constants},       {"jsa-grid", Task::JsaGrid},
    {"scan-length", Task::ScanLength},    {"scan-waist", Task::ScanWaist},
    {"separability", Task::Separability}, {"optimize", Task::Optimize}};
const std::vector<std::pair<std::string, OracleChoice>> kOracles{
    {"analytic", OracleChoice::Analytic}, {"numeric", OracleChoice::Numeric}, {"both", OracleChoice::Both}};
const std::vector<std::pair<std::string, WidthConvention>> kConventions{
    {"amplitude-1/e", WidthConvention::AmplitudeHalfWidth1e},
    {"fwhm", WidthConvention::IntensityFwhm},
    {"sigma", WidthConvention::Sigma}};
const std::vector<std::pair<std::string, WaistMode>> kWaistModes{
    {"equal", WaistMode::Equal}, {"pump", WaistMode::Pump}, {"fiber", WaistMode::Fiber}, {"optimal", WaistMode::Optimal}};
const std::vector<std::pair<std::string, OptimizeMode>> kOptimizeModes{
    {"lw", OptimizeMode::Lw}, {"fit", OptimizeMode::Fit}, {"global", OptimizeMode::Global}};
const std::vector<std::pair<std::string, InnerOptimum>> kInner{{"analytic", InnerOptimum::Analytic},
                                                               {"same", InnerOptimum::SameObjective}};
const std::vector<std::pair<std::string, Spacing>> kSpacing{{"linear", Spacing::Linear}, {"log", Spacing::Log}};
const std::vector<std::pair<std::string, FrequencyScheme>> kSchemes{{"tensor-gauss", FrequencyScheme::TensorGauss},
                                                                    {"adaptive", FrequencyScheme::Adaptive}};
const std::vector<std::pair<std::string, TransverseMethod>> kTransverse{
    {"closed-form", TransverseMethod::ClosedForm}, {"tensor", TransverseMethod::Tensor}};
const std::vector<std::pair<std::string, LongitudinalProfile>> kProfiles{{"sinc", LongitudinalProfile::Sinc},
                                                                         {"gaussian", LongitudinalProfile::Gaussian}};

std::string fmt(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::filesystem::path resolve_constants(const std::string& name, const std::filesystem::path& base_dir) {
  const std::filesystem::path p(name);
  if (p.is_absolute()) return p;
  std::vector<std::filesystem::path> candidates{base_dir / p};
  if (const char* env = std::getenv(kConstantsDirEnv); env && *env) candidates.emplace_back(std::filesystem::path(env) / p);
  candidates.emplace_back(std::filesystem::path(SPDC_DATA_DIR) / p);
  for (const auto& c : candidates) {
    if (std::filesystem::is_regular_file(c)) return std::filesystem::absolute(c).lexically_normal();
  }
  std::string tried;
  for (const auto& c : candidates) tried += (tried.empty() ? "" : ", ") + c.string();
  throw ConfigError("key 'crystal.constants': file '" + name + "' not found (tried " + tried + ")");
}

using Handler = std::function<void(RunConfig&, const std::string&, std::string_view)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h{
      {"cut.wavelength", [](RunConfig& c, const std::string& k, std::string_view v) { c.wavelength = length(k, v); }},
      {"cut.theta0", [](RunConfig& c, const std::string& k, std::string_view v) { c.theta0 = angle(k, v); }},
      {"cut.alpha", [](RunConfig& c, const std::string& k, std::string_view v) { c.alpha = angle(k, v); }},
      {"cut.axis_plane_angle",
       [](RunConfig& c, const std::string& k, std::string_view v) { c.axis_plane_angle = angle(k, v); }},
      {"setup.L", [](RunConfig& c, const std::string& k, std::string_view v) { c.L = length(k, v); }},
      {"setup.w", [](RunConfig& c, const std::string& k, std::string_view v) { c.w = length(k, v); }},
      {"setup.w_pump", [](RunConfig& c, const std::string& k, std::string_view v) { c.w_pump = length(k, v); }},
      {"setup.h",
       [](RunConfig& c, const std::string& k, std::string_view v) {
         if (v == "optimal") {
           c.h.reset();
         } else {
           c.h = length(k, v);
         }
       }},
      {"setup.pump_width", [](RunConfig& c, const std::string& k, std::string_view v) { c.pump_width = length(k, v); }},
      {"setup.filter_width",
       [](RunConfig& c, const std::string& k, std::string_view v) { c.filter_width = length(k, v); }},
      {"setup.width_convention",
       [](RunConfig& c, const std::string& k, std::string_view v) { c.convention = choice(k, v, kConventions); }},
      {"task", [](RunConfig& c, const std::string& k, std::string_view v) { c.task = choice(k, v, kTasks); }},
      {"oracle", [](RunConfig& c, const std::string& k, std::string_view v) { c.oracle = choice(k, v, kOracles); }},
      {"scan.start", [](RunConfig& c, const std::string& k, std::string_view v) { c.scan.start = length(k, v); }},
      {"scan.stop", [](RunConfig& c, const std::string& k, std::string_view v) { c.scan.stop = length(k, v); }},
      {"scan.points", [](RunConfig& c, const std::string& k, std::string_view v) { c.scan.points = integer(k, v); }},
      {"scan.spacing",
       [](RunConfig& c, const std::string& k, std::string_view v) { c.scan.spacing = choice(k, v, kSpacing); }},
      {"scan.waist_mode",
       [](RunConfig& c, const std::string& k, std::string_view v) { c.waist_mode = choice(k, v, kWaistModes); }},
      {"jsa.span", [](RunConfig& c, const std::string& k, std::string_view v) { c.jsa_span = length(k, v); }},
      {"jsa.points", [](RunConfig& c, const std::string& k, std::string_view v) { c.jsa_points = integer(k, v); }},
      {"optimize.mode",
       [](RunConfig& c, const std::string& k, std::string_view v) { c.optimize_mode = choice(k, v, kOptimizeModes); }},
      {"optimize.inner",
       [](RunConfig& c, const std::string& k, std::string_view v) { c.inner = choice(k, v, kInner); }},
      {"optimize.fit_points",
       [](RunConfig& c, const std::string& k, std::string_view v) { c.fit_points = integer(k, v); }},
      {"optimize.fit_min", [](RunConfig& c, const std::string& k, std::string_view v) { c.fit_min = length(k, v); }},
      {"optimize.fit_max", [](RunConfig& c, const std::string& k, std::string_view v) { c.fit_max = length(k, v); }},
      {"bounds.L_min", [](RunConfig& c, const std::string& k, std::string_view v) { c.bounds.L_min = length(k, v); }},
      {"bounds.L_max", [](RunConfig& c, const std::string& k, std::string_view v) { c.bounds.L_max = length(k, v); }},
      {"bounds.w_min", [](RunConfig& c, const std::string& k, std::string_view v) { c.bounds.w_min = length(k, v); }},
      {"bounds.w_max", [](RunConfig& c, const std::string& k, std::string_view v) { c.bounds.w_max = length(k, v); }},
      {"bounds.w_pump_min",
       [](RunConfig& c, const std::string& k, std::string_view v) { c.bounds.wp_min = length(k, v); }},
      {"bounds.w_pump_max",
       [](RunConfig& c, const std::string& k, std::string_view v) { c.bounds.wp_max = length(k, v); }},
      {"quadrature.transverse_points",
       [](RunConfig& c, const std::string& k, std::string_view v) { c.quadrature.transverse_points = integer(k, v); }},
      {"quadrature.transverse_span",
       [](RunConfig& c, const std::string& k, std::string_view v) { c.quadrature.transverse_span = number(k, v); }},
      {"quadrature.frequency_points",
       [](RunConfig& c, const std::string& k, std::string_view v) { c.quadrature.frequency_points = integer(k, v); }},
      {"quadrature.frequency_span",
       [](RunConfig& c, const std::string& k, std::string_view v) { c.quadrature.frequency_span = number(k, v); }},
      {"quadrature.longitudinal_points",
       [](RunConfig& c, const std::string& k, std::string_view v) {
         c.quadrature.longitudinal_points = integer(k, v);
       }},
      {"quadrature.scheme",
       [](RunConfig& c, const std::string& k, std::string_view v) { c.quadrature.scheme = choice(k, v, kSchemes); }},
      {"quadrature.transverse",
       [](RunConfig& c, const std::string& k, std::string_view v) {
         c.quadrature.transverse = choice(k, v, kTransverse);
       }},
      {"quadrature.tolerance",
       [](RunConfig& c, const std::string& k, std::string_view v) { c.quadrature.tolerance = number(k, v); }},
      {"quadrature.verify",
       [](RunConfig& c, const std::string& k, std::string_view v) { c.quadrature.verify = boolean(k, v); }},
      {"oracle.profile",
       [](RunConfig& c, const std::string& k, std::string_view v) { c.oracle_model.profile = choice(k, v, kProfiles); }},
      {"oracle.second_order",
       [](RunConfig& c, const std::string& k, std::string_view v) { c.oracle_model.second_order = boolean(k, v); }},
      {"reference.L", [](RunConfig& c, const std::string& k, std::string_view v) { c.reference_L = length(k, v); }},
      {"reference.w", [](RunConfig& c, const std::string& k, std::string_view v) { c.reference_w = length(k, v); }},
      {"reference.w_pump",
       [](RunConfig& c, const std::string& k, std::string_view v) { c.reference_w_pump = length(k, v); }},
      {"output.csv", [](RunConfig& c, const std::string&, std::string_view v) { c.csv_path = std::string(v); }},
      {"output.json", [](RunConfig& c, const std::string&, std::string_view v) { c.json_path = std::string(v); }},
      {"run.threads", [](RunConfig& c, const std::string& k, std::string_view v) { c.threads = integer(k, v); }},
  };
  return h;
}

void require_positive(double x, const char* key) {
  if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError(std::string("key '") + key + "': must be positive");
}

}  // namespace

std::vector<double> ScanGrid::values() const {
  std::vector<double> v(points);
  for (int k = 0; k < points; ++k) {
    const double t = points == 1 ? 0.0 : static_cast<double>(k) / (points - 1);
    v[k] = spacing == Spacing::Linear ? start + (stop - start) * t : start * std::pow(stop / start, t);
  }
  return v;
}

std::string to_string(Task t) { return name_of(t, kTasks); }
std::string to_string(OracleChoice o) { return name_of(o, kOracles); }

void RunConfig::validate() const {
  require_positive(wavelength, "cut.wavelength");
  if (theta0.has_value() == alpha.has_value()) {
    throw ConfigError("keys 'cut.theta0' / 'cut.alpha': give exactly one of them");
  }
  require_positive(L, "setup.L");
  require_positive(w, "setup.w");
  require_positive(w_pump, "setup.w_pump");
  require_positive(pump_width, "setup.pump_width");
  require_positive(filter_width, "setup.filter_width");
  require_positive(reference_L, "reference.L");
  require_positive(reference_w, "reference.w");
  require_positive(reference_w_pump, "reference.w_pump");
  if (threads < 0) throw ConfigError("key 'run.threads': must be >= 0");
  try {
    quadrature.validate();
    bounds.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("quadrature/bounds settings: ") + e.what());
  }

  const bool scanning = task == Task::ScanLength || task == Task::ScanWaist || task == Task::Separability;
  if (scanning) {
    if (scan.points < 2) throw ConfigError("key 'scan.points': a scan needs at least 2 points");
    if (!(scan.start > 0.0) || !(scan.stop > scan.start)) {
      throw ConfigError("keys 'scan.start' / 'scan.stop': need 0 < start < stop (empty scan range)");
    }
  }
  if (task == Task::JsaGrid) {
    if (jsa_points < 2) throw ConfigError("key 'jsa.points': need at least 2");
    require_positive(jsa_span, "jsa.span");
  }
  if (task == Task::Optimize) {
    if (oracle == OracleChoice::Both) throw ConfigError("key 'oracle': task optimize needs analytic or numeric");
    if (optimize_mode == OptimizeMode::Fit) {
      if (fit_points < 8) throw ConfigError("key 'optimize.fit_points': a fit needs at least 8 points");
      if (!(fit_min > 0.0) || !(fit_max > fit_min)) {
        throw ConfigError("keys 'optimize.fit_min' / 'optimize.fit_max': need 0 < min < max");
      }
    }
  }
}

std::vector<std::pair<std::string, std::string>> RunConfig::resolved() const {
  auto len = [](double x) { return fmt(x) + " m"; };
  auto ang = [](double x) { return fmt(x) + " rad"; };
  std::vector<std::pair<std::string, std::string>> r{
      {"crystal.constants", constants_path.string()},
      {"cut.wavelength", len(wavelength)},
  };
  if (theta0) r.emplace_back("cut.theta0", ang(*theta0));
  if (alpha) r.emplace_back("cut.alpha", ang(*alpha));
  r.insert(r.end(), {
                        {"cut.axis_plane_angle", ang(axis_plane_angle)},
                        {"setup.L", len(L)},
                        {"setup.w", len(w)},
                        {"setup.w_pump", len(w_pump)},
                        {"setup.h", h ? len(*h) : "optimal"},
                        {"setup.pump_width", len(pump_width)},
                        {"setup.filter_width", len(filter_width)},
                        {"setup.width_convention", name_of(convention, kConventions)},
                        {"task", name_of(task, kTasks)},
                        {"oracle", name_of(oracle, kOracles)},
                        {"scan.start", len(scan.start)},
                        {"scan.stop", len(scan.stop)},
                        {"scan.points", std::to_string(scan.points)},
                        {"scan.spacing", name_of(scan.spacing, kSpacing)},
                        {"scan.waist_mode", name_of(waist_mode, kWaistModes)},
                        {"jsa.span", len(jsa_span)},
                        {"jsa.points", std::to_string(jsa_points)},
                        {"optimize.mode", name_of(optimize_mode, kOptimizeModes)},
                        {"optimize.inner", name_of(inner, kInner)},
                        {"optimize.fit_points", std::to_string(fit_points)},
                        {"optimize.fit_min", len(fit_min)},
                        {"optimize.fit_max", len(fit_max)},
                        {"bounds.L_min", len(bounds.L_min)},
                        {"bounds.L_max", len(bounds.L_max)},
                        {"bounds.w_min", len(bounds.w_min)},
                        {"bounds.w_max", len(bounds.w_max)},
                        {"bounds.w_pump_min", len(bounds.wp_min)},
                        {"bounds.w_pump_max", len(bounds.wp_max)},
                        {"quadrature.transverse_points", std::to_string(quadrature.transverse_points)},
                        {"quadrature.transverse_span", fmt(quadrature.transverse_span)},
                        {"quadrature.frequency_points", std::to_string(quadrature.frequency_points)},
                        {"quadrature.frequency_span", fmt(quadrature.frequency_span)},
                        {"quadrature.longitudinal_points", std::to_string(quadrature.longitudinal_points)},
                        {"quadrature.scheme", name_of(quadrature.scheme, kSchemes)},
                        {"quadrature.transverse", name_of(quadrature.transverse, kTransverse)},
                        {"quadrature.tolerance", fmt(quadrature.tolerance)},
                        {"quadrature.verify", quadrature.verify ? "true" : "false"},
                        {"oracle.profile", name_of(oracle_model.profile, kProfiles)},
                        {"oracle.second_order", oracle_model.second_order ? "true" : "false"},
                        {"reference.L", len(reference_L)},
                        {"reference.w", len(reference_w)},
                        {"reference.w_pump", len(reference_w_pump)},
                        {"output.csv", csv_path},
                        {"output.json", json_path},
                        {"run.threads", std::to_string(threads)},
                    });
  return r;
}

std::string RunConfig::to_text() const {
  std::string out;
  for (const auto& [k, v] : resolved()) out += k + " = " + v + "\n";
  return out;
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir, const std::string& stem) {
  RunConfig c;
  bool have_task = false;
  std::string constants = "bbo.constants";
  for (const auto& kv : parse_key_values(text)) {
    if (kv.key == "crystal.constants") {
      constants = kv.value;
      continue;
    }
    const auto it = handlers().find(kv.key);
    if (it == handlers().end()) {
      throw ConfigError("line " + std::to_string(kv.line) + ": unknown key '" + kv.key + "'");
    }
    if (kv.value.empty()) throw ConfigError("key '" + kv.key + "': empty value");
    it->second(c, kv.key, kv.value);
    have_task = have_task || kv.key == "task";
  }
  if (!have_task) throw ConfigError("key 'task': missing (one of constants, jsa-grid, scan-length, scan-waist, "
                                    "separability, optimize)");
  c.constants_path = resolve_constants(constants, base_dir);
  if (c.csv_path.empty()) c.csv_path = stem + ".csv";
  if (c.json_path.empty()) c.json_path = stem + ".json";
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  const std::string text = read_text_file(path.string());
  const auto base = std::filesystem::absolute(path).parent_path();
  const auto stem = path.stem().string();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(path.string() + ": invalid JSON: " + e.what());
    }
    if (!j.contains("metadata") || !j["metadata"].contains("config") || !j["metadata"]["config"].is_object()) {
      throw ConfigError(path.string() + ": JSON input needs a metadata.config object");
    }
    std::string cfg;
    for (const auto& [k, v] : j["metadata"]["config"].items()) {
      if (!v.is_string()) throw ConfigError("metadata.config." + k + ": expected a string value");
      cfg += k + " = " + v.get<std::string>() + "\n";
    }
    return parse_config(cfg, base, stem);
  }
  return parse_config(text, base, stem);
}

}  // namespace spdc
