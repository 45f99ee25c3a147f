#include "htlab/laplace.hpp"

#include <cmath>
#include <stdexcept>

namespace htlab::num {

double invert_laplace(const LaplaceTransform& transform, double t,
                      InversionTarget target, int nodes) {
  if (!(t > 0.0)) throw std::domain_error("invert_laplace: t must be > 0");
  if (nodes < 8) throw std::domain_error("invert_laplace: need >= 8 nodes");
  if (!transform.evaluator)
    throw std::invalid_argument("invert_laplace: empty transform");

  // Smoothness probe: a transform of a density vanishes for large real
  // lambda; a point mass does not and cannot be inverted meaningfully.
  {
    const double f_low = std::abs(transform(1.0 / t));
    const double f_high = std::abs(transform(1e8 / t));
    if (f_high > 1e-3 * std::max(f_low, 1e-12) && f_high > 1e-10)
      throw std::domain_error(
          "invert_laplace: transform does not vanish at large lambda "
          "(degenerate or non-smooth law)");
  }

  const double kPi = 3.14159265358979323846;
  const int m = nodes;
  const double r = 2.0 * m / (5.0 * t);

  auto eval = [&](std::complex<double> s) {
    std::complex<double> v = transform.evaluator(s);
    if (target == InversionTarget::kCdf) v /= s;
    return v;
  };

  double acc = 0.5 * eval(std::complex<double>(r, 0.0)).real() *
               std::exp(r * t);
  for (int k = 1; k < m; ++k) {
    const double theta = k * kPi / m;
    const double cot = std::cos(theta) / std::sin(theta);
    const std::complex<double> s(r * theta * cot, r * theta);
    // Contributions this deep into the left half plane are below double
    // precision noise; skip the (potentially expensive) evaluation.
    if (s.real() * t < -46.0) continue;
    const double sigma = theta + (theta * cot - 1.0) * cot;
    const std::complex<double> weight =
        std::exp(s * t) * std::complex<double>(1.0, sigma);
    acc += (weight * eval(s)).real();
  }
  return acc * r / m;
}

}  // namespace htlab::num
