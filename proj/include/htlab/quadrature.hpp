#pragma once

#include <complex>
#include <functional>
#include <limits>

#include "htlab/errors.hpp"

namespace htlab::num {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
};

// Adaptive Gauss-Kronrod (G7/K15) on a finite interval, or with b == +inf
// the tail is folded through y = 1/u onto a finite interval first. Endpoint
// power singularities go through the tanh-sinh rule below instead.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double tol);

// Tanh-sinh rule on a finite interval; integrable endpoint singularities
// (power law) are handled by construction.
QuadratureResult integrate_tanh_sinh(const std::function<double(double)>& f,
                                     double a, double b, double tol);

// Complex-valued integrand over a real interval (used for Bessel transforms
// evaluated on an inversion contour).
std::complex<double> integrate_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    double tol, double* error_estimate = nullptr);

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace htlab::num
