#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "htlab/errors.hpp"

namespace htlab::paths {

struct TimeGrid {
  std::vector<double> times;  // strictly increasing, starting at 0

  static TimeGrid uniform(double horizon, double dt);
  double horizon() const { return times.back(); }
  double max_step() const;
  std::size_t size() const { return times.size(); }
};

// A benchmarked portfolio path with its running extrema, Azema process and
// honest-time estimate.
struct BenchmarkedPath {
  TimeGrid grid;
  std::vector<double> n;      // N_t > 0
  std::vector<double> sigma;  // running max of n
  std::vector<double> i_min;  // running min of n
  std::vector<double> z;      // n / sigma in (0, 1]
  double g_hat = 0.0;
  bool g_valid = false;
  double tail_epsilon = 0.0;
  bool continuous_model = true;
};

// Piecewise-constant running max / min of a positive path.
void running_extrema(std::span<const double> n, std::vector<double>* sigma,
                     std::vector<double>* i_min);

std::vector<double> azema_process(std::span<const double> n,
                                  std::span<const double> sigma);

// Fills sigma / i_min / z and, when the terminal Azema value is within the
// tail bound, the honest-time estimate.
void annotate(BenchmarkedPath& path, double tail_epsilon);

// Last grid time at which n attains sigma.back() (ties resolve to the last
// index). Refuses with TailBoundError when z at the horizon still exceeds
// epsilon: the global maximum may well be ahead, simulate further.
double extract_honest_time(const TimeGrid& grid, std::span<const double> n,
                           std::span<const double> sigma, double epsilon);

// E(ln Sigma_inf | F_t) = N_t/Sigma_t + ln Sigma_t.
double conditional_logmax(double n_t, double sigma_t);

struct DoobMeyerDecomposition {
  std::vector<double> martingale_part;  // sum of (1/Sigma) dN, left endpoint
  std::vector<double> increasing_part;  // ln(Sigma_t / Sigma_0)
  std::vector<double> reconstruction;   // 1 + M - ln(Sigma/Sigma_0)
  double sup_error = 0.0;               // sup_t |reconstruction - Z|
  std::string warning;                  // set for jump-model paths
};

// Discrete Doob-Meyer decomposition of Z; exact only for continuous models,
// which is flagged through BenchmarkedPath::continuous_model.
DoobMeyerDecomposition doob_meyer_check(const BenchmarkedPath& path);

struct TimeChangeCheck {
  std::vector<double> d_path;   // cumulative sum of dN/N (left endpoint)
  std::vector<double> qv_path;  // cumulative (dN/N)^2
  double reconstruction_error = 0.0;  // sup |N_0 exp(D - QV/2) - N|
  std::size_t g_index_time_change = 0;  // last argmax of D - QV/2
  std::size_t g_index_direct = 0;       // last argmax of N
};

TimeChangeCheck time_change_check(std::span<const double> n);

}  // namespace htlab::paths
