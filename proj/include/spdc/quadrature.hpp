#pragma once

#include <vector>

namespace spdc {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1].
const QuadratureRule& gauss_legendre(int n);
// n-point Gauss-Hermite rule for weight exp(-x^2) on the real line.
const QuadratureRule& gauss_hermite(int n);

// Gauss-Legendre nodes mapped onto [a, b] with weights scaled accordingly.
QuadratureRule gauss_legendre_on(int n, double a, double b);

}  // namespace spdc
