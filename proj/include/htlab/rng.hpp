#pragma once

#include <cstdint>

namespace htlab::num {

// Counter-keyed per-path random stream: xoshiro256++ state derived from
// (seed, stream_id) through splitmix64. Equal (seed, stream_id) always
// reproduces the same sequence; distinct stream ids give statistically
// independent streams, so paths can be simulated from concurrent workers
// without coordination.
class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64();
  double uniform_co();  // [0, 1)
  double uniform_oc();  // (0, 1]
  double gauss();       // standard normal (polar method)
  double exponential(); // rate 1

 private:
  std::uint64_t s_[4];
  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
  double cached_gauss_ = 0.0;
  bool has_cached_gauss_ = false;
};

// First passage time of W_t + (1/mean)-drift style law; parameterized by its
// mean and shape. mean = a, shape = a^2 is the hitting law of level a by
// W_t + t.
double sample_inverse_gaussian(double mean, double shape, RngStream& rng);

std::uint64_t sample_poisson(double mean, RngStream& rng);

double sample_gamma(double shape, RngStream& rng);  // unit scale

// Exact squared-Bessel transition ingredient: noncentral chi-square with
// `dof` degrees of freedom and noncentrality `nc`.
double sample_noncentral_chisq(double dof, double nc, RngStream& rng);

}  // namespace htlab::num
