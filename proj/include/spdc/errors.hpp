#pragma once

#include <stdexcept>
#include <string>

namespace spdc {

// Input outside the domain of a physical relation (wavelength window,
// evanescent wave vector, degenerate geometry).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class PhaseMatchingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical derivative or quadrature that failed its convergence check.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double coarse = 0.0, double fine = 0.0)
      : std::runtime_error(what), coarse_(coarse), fine_(fine) {}
  double coarse_estimate() const { return coarse_; }
  double fine_estimate() const { return fine_; }

 private:
  double coarse_;
  double fine_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spdc
