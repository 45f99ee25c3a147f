#pragma once

#include <complex>

namespace htlab::num {

// Modified Bessel function of the second kind, K_nu(z), nu >= 0, z > 0.
// Series expansion below z = 2, Steed continued fraction above, forward
// recurrence in the order. Relative accuracy ~1e-13 over nu in [0, 5],
// z in [1e-6, 50].
//
// Throws std::domain_error for z <= 0 or nu < 0 and std::range_error when
// the value over/underflows (tiny z with large nu, or z beyond ~700).
double bessel_k(double nu, double z);

// K_nu on the right half plane (Re z > 0), used when a Laplace transform
// built from K_nu is evaluated on an inversion contour. Asymptotic series
// for |z| >= 16, otherwise quadrature of the integral representation
// K_nu(z) = int_0^inf exp(-z cosh t) cosh(nu t) dt.
std::complex<double> bessel_k(double nu, std::complex<double> z);

}  // namespace htlab::num
