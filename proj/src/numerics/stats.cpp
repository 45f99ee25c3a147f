#include "htlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace htlab::num {

double ks_statistic(std::span<const double> samples,
                    const std::function<double(double)>& cdf) {
  if (samples.empty())
    throw std::invalid_argument("ks_statistic: empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double F = cdf(sorted[i]);
    d = std::max(d, (static_cast<double>(i) + 1.0) / n - F);
    d = std::max(d, F - static_cast<double>(i) / n);
  }
  return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("ks_two_sample: empty sample");
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= x) ++i;
    while (j < sb.size() && sb[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  return d;
}

MeanStdErr mean_std_error(std::span<const double> samples) {
  if (samples.empty())
    throw std::invalid_argument("mean_std_error: empty sample");
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(samples.size());
  double var = 0.0;
  for (double x : samples) var += (x - mean) * (x - mean);
  const auto n = static_cast<double>(samples.size());
  var = samples.size() > 1 ? var / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n), samples.size()};
}

}  // namespace htlab::num
