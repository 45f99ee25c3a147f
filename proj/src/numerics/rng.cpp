#include "htlab/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace htlab::num {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  std::uint64_t key = seed ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1));
  std::uint64_t sm = key;
  for (auto& s : s_) s = splitmix64(sm);
  if (!(s_[0] | s_[1] | s_[2] | s_[3])) s_[0] = 0x1ULL;  // all-zero is invalid
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::uniform_co() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_oc() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double RngStream::gauss() {
  if (has_cached_gauss_) {
    has_cached_gauss_ = false;
    return cached_gauss_;
  }
  double v1, v2, s;
  do {
    v1 = 2.0 * uniform_co() - 1.0;
    v2 = 2.0 * uniform_co() - 1.0;
    s = v1 * v1 + v2 * v2;
  } while (s >= 1.0 || s == 0.0);
  double f = std::sqrt(-2.0 * std::log(s) / s);
  cached_gauss_ = v2 * f;
  has_cached_gauss_ = true;
  return v1 * f;
}

double RngStream::exponential() { return -std::log(uniform_oc()); }

double sample_inverse_gaussian(double mean, double shape, RngStream& rng) {
  if (!(mean > 0.0) || !(shape > 0.0))
    throw std::domain_error("inverse_gaussian: mean and shape must be > 0");
  // Michael-Schucany-Haas transformation with a root-selection uniform.
  double z = rng.gauss();
  double y = z * z;
  double x = mean + mean * mean * y / (2.0 * shape) -
             (mean / (2.0 * shape)) *
                 std::sqrt(4.0 * mean * shape * y + mean * mean * y * y);
  if (rng.uniform_co() <= mean / (mean + x)) return x;
  return mean * mean / x;
}

std::uint64_t sample_poisson(double mean, RngStream& rng) {
  if (mean < 0.0) throw std::domain_error("poisson: mean must be >= 0");
  std::uint64_t total = 0;
  // Split large means; a sum of independent Poisson draws is Poisson.
  while (mean > 30.0) {
    double chunk = 30.0;
    double limit = std::exp(-chunk);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= rng.uniform_oc();
    } while (p > limit);
    total += k - 1;
    mean -= chunk;
  }
  if (mean == 0.0) return total;
  double limit = std::exp(-mean);
  std::uint64_t k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= rng.uniform_oc();
  } while (p > limit);
  return total + k - 1;
}

double sample_gamma(double shape, RngStream& rng) {
  if (!(shape > 0.0)) throw std::domain_error("gamma: shape must be > 0");
  if (shape < 1.0) {
    // Boost to shape+1 and scale back (Marsaglia-Tsang).
    double u = rng.uniform_oc();
    return sample_gamma(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.gauss();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    double u = rng.uniform_oc();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_noncentral_chisq(double dof, double nc, RngStream& rng) {
  if (!(dof > 0.0) || nc < 0.0)
    throw std::domain_error("noncentral_chisq: dof > 0 and nc >= 0 required");
  std::uint64_t j = nc > 0.0 ? sample_poisson(0.5 * nc, rng) : 0;
  return 2.0 * sample_gamma(0.5 * dof + static_cast<double>(j), rng);
}

}  // namespace htlab::num
