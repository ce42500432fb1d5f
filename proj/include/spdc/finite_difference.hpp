#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace spdc {

// Central differences at steps h, h/2, h/4, h/8 combined by Richardson
// extrapolation, R_k = (4 D(h/2^k) - D(h/2^(k-1))) / 3.
//  - stencil_order = log2(|D(h/2) - D(h/4)| / |D(h/4) - D(h/8)|): about 2.
//  - observed_order = log2(|R1 - R2| / |R2 - R3|) for the returned value: about 4.
// Differences already at the rounding floor report order infinity.
struct DerivativeEstimate {
  double value = 0.0;           // R3
  double coarse = 0.0;          // R2
  double error_estimate = 0.0;  // |R3 - R2|
  double observed_order = 0.0;
  double stencil_order = 0.0;
};

namespace detail {

inline double order_of(double a, double b, double c, double floor) {
  const double d1 = std::abs(a - b);
  const double d2 = std::abs(b - c);
  if (d2 <= floor) return d1 <= floor ? std::numeric_limits<double>::infinity() : 8.0;
  return std::log2(d1 / d2);
}

// d[k] is the central difference at step h / 2^k. `scale` bounds the size of
// the function values divided by the step power, which sets the rounding floor.
inline DerivativeEstimate richardson(const double (&d)[4], double scale) {
  const double r1 = (4.0 * d[1] - d[0]) / 3.0;
  const double r2 = (4.0 * d[2] - d[1]) / 3.0;
  const double r3 = (4.0 * d[3] - d[2]) / 3.0;
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(scale), std::abs(d[3]));
  DerivativeEstimate e;
  e.value = r3;
  e.coarse = r2;
  e.error_estimate = std::abs(r3 - r2);
  e.observed_order = order_of(r1, r2, r3, floor);
  e.stencil_order = order_of(d[1], d[2], d[3], floor);
  return e;
}

}  // namespace detail

template <class F>
double central_difference(F&& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// `magnitude` is the size of the terms that make up f; it sets the rounding
// floor when f itself nearly cancels. Zero means |f(x)|.
template <class F>
DerivativeEstimate derivative(F&& f, double x, double h, double magnitude = 0.0) {
  double d[4];
  for (int k = 0; k < 4; ++k) d[k] = central_difference(f, x, h / (1 << k));
  if (magnitude == 0.0) magnitude = std::abs(f(x));
  return detail::richardson(d, 8.0 * magnitude / h);
}

template <class F>
double second_difference(F&& f, double x, double h) {
  return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

template <class F>
DerivativeEstimate second_derivative(F&& f, double x, double h) {
  double d[4];
  for (int k = 0; k < 4; ++k) d[k] = second_difference(f, x, h / (1 << k));
  return detail::richardson(d, 64.0 * 4.0 * std::abs(f(x)) / (h * h));
}

// Mixed second derivative of f(u, v) at (x, y), four-point cross stencil.
template <class F>
double mixed_second_difference(F&& f, double x, double y, double hx, double hy) {
  return (f(x + hx, y + hy) - f(x + hx, y - hy) - f(x - hx, y + hy) + f(x - hx, y - hy)) / (4.0 * hx * hy);
}

template <class F>
DerivativeEstimate mixed_second_derivative(F&& f, double x, double y, double hx, double hy) {
  double d[4];
  for (int k = 0; k < 4; ++k) d[k] = mixed_second_difference(f, x, y, hx / (1 << k), hy / (1 << k));
  return detail::richardson(d, 64.0 * std::abs(f(x, y)) / (hx * hy));
}

}  // namespace spdc
