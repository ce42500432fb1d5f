#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>

#include "spdc/keyvalue.hpp"
#include "spdc/model.hpp"
#include "spdc/phase_matching.hpp"
#include "spdc/units.hpp"

namespace test {

// Values computed independently in 40-digit arithmetic by golden/make_golden.py.
inline const std::map<std::string, double>& golden() {
  static const std::map<std::string, double> values = [] {
    std::map<std::string, double> m;
    for (const auto& kv : spdc::parse_key_values(spdc::read_text_file(SPDC_TEST_DIR "/golden/bbo_780nm.golden"))) {
      m[kv.key] = std::stod(kv.value);
    }
    return m;
  }();
  return values;
}

inline double g(const std::string& key) {
  const auto it = golden().find(key);
  if (it == golden().end()) throw std::out_of_range("golden key " + key);
  return it->second;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

constexpr double kLambda0 = 780e-9;
constexpr double kTheta0 = 1.4 * spdc::units::deg;

struct Bbo {
  spdc::SellmeierSet sellmeier = spdc::bbo_sellmeier();
  spdc::Crystal crystal = spdc::phase_matched_crystal(sellmeier, kLambda0, kTheta0, 0.25 * spdc::kPi);
  spdc::OpticalConstants constants = spdc::derive_constants(sellmeier, crystal.cut, kLambda0, kTheta0);
};

inline const Bbo& bbo() {
  static const Bbo b;
  return b;
}

// Pump 5 nm and filter 17 nm as amplitude 1/e half-widths.
inline spdc::SetupParams setup(double L, double w, double w_pump) {
  spdc::SetupParams s;
  s.L = L;
  s.w = w;
  s.w_pump = w_pump;
  s.sigma_pump = spdc::spectral_sigma(5e-9, kLambda0 / 2, spdc::WidthConvention::AmplitudeHalfWidth1e);
  s.sigma_filter = spdc::spectral_sigma(17e-9, kLambda0, spdc::WidthConvention::AmplitudeHalfWidth1e);
  return s;
}

}  // namespace test
