#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace spdc {

enum class Polarization { Ordinary, Extraordinary };

// n^2(lambda) = A + B / (lambda^2 - C) - D lambda^2, lambda in micrometers.
struct SellmeierCoefficients {
  double A = 1.0;
  double B = 0.0;  // um^2
  double C = 0.0;  // um^2
  double D = 0.0;  // um^-2

  double n_squared(double lambda_um) const;
  // d(n^2)/d(lambda) in um^-1.
  double dn_squared_dlambda(double lambda_um) const;
};

// Dispersion data for a uniaxial crystal with a declared validity window.
class SellmeierSet {
 public:
  SellmeierSet() = default;
  SellmeierSet(std::string name, SellmeierCoefficients ordinary, SellmeierCoefficients extraordinary,
               double min_wavelength, double max_wavelength);

  const std::string& name() const { return name_; }
  const SellmeierCoefficients& coefficients(Polarization p) const {
    return p == Polarization::Ordinary ? ordinary_ : extraordinary_;
  }
  double min_wavelength() const { return min_wavelength_; }  // m
  double max_wavelength() const { return max_wavelength_; }  // m

  // Refractive index at a vacuum wavelength in meters. Throws DomainError
  // outside the validity window.
  double index(Polarization p, double wavelength) const;
  // dn/d(lambda) in 1/m.
  double index_derivative(Polarization p, double wavelength) const;

  // Same quantities parameterized by angular frequency (rad/s).
  double index_at(Polarization p, double omega) const;
  // dn/d(omega) in s/rad.
  double index_derivative_at(Polarization p, double omega) const;

  bool in_window(double wavelength) const {
    return wavelength >= min_wavelength_ && wavelength <= max_wavelength_;
  }

 private:
  void check_window(double wavelength) const;

  std::string name_;
  SellmeierCoefficients ordinary_;
  SellmeierCoefficients extraordinary_;
  double min_wavelength_ = 0.0;
  double max_wavelength_ = 0.0;
};

// Parses the key/value constants format:
//   crystal.name, sellmeier.{o,e}.{A,B,C,D}, validity.{min_um,max_um}
// Lines starting with '#' are comments. Unknown or missing keys throw ConfigError.
SellmeierSet parse_sellmeier(std::string_view text);
SellmeierSet load_sellmeier(const std::filesystem::path& path);

// The shipped BBO set (data/bbo.constants), embedded for library use without files.
SellmeierSet bbo_sellmeier();

}  // namespace spdc
