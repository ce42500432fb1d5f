#include "spdc/sellmeier.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <sstream>

#include "spdc/errors.hpp"
#include "spdc/keyvalue.hpp"
#include "spdc/units.hpp"

namespace spdc {

double SellmeierCoefficients::n_squared(double lambda_um) const {
  const double l2 = lambda_um * lambda_um;
  return A + B / (l2 - C) - D * l2;
}

double SellmeierCoefficients::dn_squared_dlambda(double lambda_um) const {
  const double l2 = lambda_um * lambda_um;
  const double denom = l2 - C;
  return -2.0 * B * lambda_um / (denom * denom) - 2.0 * D * lambda_um;
}

SellmeierSet::SellmeierSet(std::string name, SellmeierCoefficients ordinary,
                           SellmeierCoefficients extraordinary, double min_wavelength,
                           double max_wavelength)
    : name_(std::move(name)),
      ordinary_(ordinary),
      extraordinary_(extraordinary),
      min_wavelength_(min_wavelength),
      max_wavelength_(max_wavelength) {
  if (!(min_wavelength_ > 0.0) || !(max_wavelength_ > min_wavelength_)) {
    throw ConfigError("Sellmeier set '" + name_ + "': invalid validity window");
  }
}

void SellmeierSet::check_window(double wavelength) const {
  if (!in_window(wavelength)) {
    std::ostringstream msg;
    msg << "wavelength " << wavelength / units::um << " um outside the " << name_ << " validity window ["
        << min_wavelength_ / units::um << ", " << max_wavelength_ / units::um << "] um";
    throw DomainError(msg.str());
  }
}

double SellmeierSet::index(Polarization p, double wavelength) const {
  check_window(wavelength);
  const double n2 = coefficients(p).n_squared(wavelength / units::um);
  if (!(n2 > 1.0)) throw DomainError("Sellmeier set '" + name_ + "' yields n^2 <= 1");
  return std::sqrt(n2);
}

double SellmeierSet::index_derivative(Polarization p, double wavelength) const {
  const double n = index(p, wavelength);
  const double dn2_dlambda_um = coefficients(p).dn_squared_dlambda(wavelength / units::um);
  return dn2_dlambda_um / (2.0 * n) / units::um;
}

double SellmeierSet::index_at(Polarization p, double omega) const { return index(p, wavelength_of(omega)); }

double SellmeierSet::index_derivative_at(Polarization p, double omega) const {
  const double lambda = wavelength_of(omega);
  // d(lambda)/d(omega) = -lambda / omega
  return index_derivative(p, lambda) * (-lambda / omega);
}

SellmeierSet parse_sellmeier(std::string_view text) {
  const auto entries = parse_key_values(text);
  std::map<std::string, std::optional<double>, std::less<>> numeric{
      {"sellmeier.o.A", {}}, {"sellmeier.o.B", {}}, {"sellmeier.o.C", {}}, {"sellmeier.o.D", {}},
      {"sellmeier.e.A", {}}, {"sellmeier.e.B", {}}, {"sellmeier.e.C", {}}, {"sellmeier.e.D", {}},
      {"validity.min_um", {}}, {"validity.max_um", {}}};
  std::optional<std::string> name;
  for (const auto& kv : entries) {
    if (kv.key == "crystal.name") {
      name = kv.value;
      continue;
    }
    auto it = numeric.find(kv.key);
    if (it == numeric.end()) {
      throw ConfigError("constants file line " + std::to_string(kv.line) + ": unknown key '" + kv.key + "'");
    }
    it->second = parse_number(kv.value, kv.key);
  }
  if (!name) throw ConfigError("constants file: missing key 'crystal.name'");
  for (const auto& [key, value] : numeric) {
    if (!value) throw ConfigError("constants file: missing key '" + key + "'");
  }
  auto get = [&](const char* key) { return *numeric.at(key); };
  SellmeierCoefficients o{get("sellmeier.o.A"), get("sellmeier.o.B"), get("sellmeier.o.C"), get("sellmeier.o.D")};
  SellmeierCoefficients e{get("sellmeier.e.A"), get("sellmeier.e.B"), get("sellmeier.e.C"), get("sellmeier.e.D")};
  return SellmeierSet(*name, o, e, get("validity.min_um") * units::um, get("validity.max_um") * units::um);
}

SellmeierSet load_sellmeier(const std::filesystem::path& path) {
  return parse_sellmeier(read_text_file(path.string()));
}

SellmeierSet bbo_sellmeier() {
  return SellmeierSet("BBO", {2.7359, 0.01878, 0.01822, 0.01354}, {2.3753, 0.01224, 0.01667, 0.01516},
                      0.2 * units::um, 1.1 * units::um);
}

}  // namespace spdc
