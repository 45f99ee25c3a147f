#pragma once

#include <functional>
#include <span>
#include <vector>

namespace htlab::num {

// Kolmogorov-Smirnov sup-distance between the empirical CDF of `samples`
// and the given CDF. Throws std::invalid_argument on an empty sample.
double ks_statistic(std::span<const double> samples,
                    const std::function<double(double)>& cdf);

// Two-sample KS distance.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

struct MeanStdErr {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

MeanStdErr mean_std_error(std::span<const double> samples);

}  // namespace htlab::num
