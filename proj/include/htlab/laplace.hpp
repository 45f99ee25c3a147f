#pragma once

#include <complex>
#include <functional>
#include <string>

namespace htlab::num {

// A Laplace transform of a probability law. The evaluator must accept the
// complex arguments an inversion contour produces; for transforms of laws it
// maps (0,inf) into [0,1] and is nonincreasing there.
struct LaplaceTransform {
  std::function<std::complex<double>(std::complex<double>)> evaluator;
  std::string domain_note;

  double operator()(double lambda) const {
    return evaluator(std::complex<double>(lambda, 0.0)).real();
  }
};

enum class InversionTarget { kDensity, kCdf };

// Fixed-Talbot inversion at t > 0. With kCdf the transform is divided by
// lambda first, so the result is the distribution function. Degenerate
// transforms that do not vanish for large real lambda (point masses) are
// rejected rather than inverted into noise.
double invert_laplace(const LaplaceTransform& transform, double t,
                      InversionTarget target = InversionTarget::kDensity,
                      int nodes = 32);

}  // namespace htlab::num
