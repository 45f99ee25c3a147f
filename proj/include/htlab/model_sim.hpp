#pragma once

#include <cstdint>
#include <vector>

#include "htlab/path_stats.hpp"
#include "htlab/rng.hpp"

namespace htlab::sim {

// Benchmarked Black-Scholes model: N_t = exp(2 sigma W_t - 2 sigma^2 t).
struct GbmModel {
  double sigma = 0.2;
};

// Minimal-market-model style benchmarked account: N_t = x / R2_{phi(t)} with
// R2 a dimension-4 squared Bessel started at x and phi the strictly
// increasing time change phi(t) = alpha0/(4 eta) (e^{eta t} - 1).
struct MmmModel {
  double alpha0 = 0.043;
  double eta = 0.052;
  double x = 1.0;
};

double mmm_phi(const MmmModel& m, double t);
double mmm_phi_inverse(const MmmModel& m, double phi);

// Transient squared Bessel benchmark: N_t = (x0 / R2_t)^nu, dim in {3, 4}.
struct BesqModel {
  int dim = 4;
  double x0 = 1.0;
  double nu() const { return 0.5 * dim - 1.0; }
};

struct Snapshot {
  double t = 0.0;
  double n = 0.0;
  double sigma = 0.0;
};

// Per-path summary of an adaptive-horizon simulation: the path runs until
// its Azema value drops under epsilon (so the global maximum has been seen
// with conditional probability >= 1 - epsilon) and all snapshots are taken.
struct PathSummary {
  double sigma_end = 0.0;  // running max of N at acceptance
  double n_end = 0.0;
  double z_end = 0.0;
  double g_hat = 0.0;      // time of the last attainment of the max
  double t_end = 0.0;
  bool accepted = false;
  std::vector<Snapshot> snapshots;
};

struct GbmSummaryRequest {
  double dt = 0.01;
  double epsilon = 0.01;
  double t_max = 1e5;
  std::vector<double> snapshot_times;  // ascending
  bool bridge_max = true;  // sample the exact in-step maximum
};

std::vector<PathSummary> simulate_gbm_summaries(const GbmModel& model,
                                                const GbmSummaryRequest& req,
                                                std::size_t n_paths,
                                                std::uint64_t seed,
                                                std::uint64_t stream_offset = 0);

struct BesqSummaryRequest {
  // Clock step grows affinely, dt(c) = step_abs + step_rel * c, keeping the
  // per-step relative move of R2 roughly constant.
  double step_abs = 1e-4;
  double step_rel = 4e-4;
  double epsilon = 0.01;
  double clock_max = 1e7;
  std::vector<double> snapshot_times;  // in the model's own time
};

std::vector<PathSummary> simulate_besq_summaries(const BesqModel& model,
                                                 const BesqSummaryRequest& req,
                                                 std::size_t n_paths,
                                                 std::uint64_t seed,
                                                 std::uint64_t stream_offset = 0);

// Same engine on the phi clock; times in the summaries are mapped back to
// model time.
std::vector<PathSummary> simulate_mmm_summaries(const MmmModel& model,
                                                const BesqSummaryRequest& req,
                                                std::size_t n_paths,
                                                std::uint64_t seed,
                                                std::uint64_t stream_offset = 0);

// Monte Carlo probability that the benchmarked path attains a new global
// maximum, started from Azema value z_state = N_t / Sigma_t. Continuations
// stop as failures once their own Azema value falls under eps_cont.
double gbm_new_max_probability(double z_state, double dt, double eps_cont,
                               std::size_t n_paths, std::uint64_t seed,
                               std::uint64_t stream_offset = 0);

// Same for the squared-Bessel family: probability of a future new minimum
// of R2, given the current ratio r2/i_min >= 1.
double besq_new_min_probability(const BesqModel& model, double r2_over_imin,
                                double eps_cont, std::size_t n_paths,
                                std::uint64_t seed,
                                std::uint64_t stream_offset = 0);

// Full-path simulators for figures, replay and hedging studies.
paths::BenchmarkedPath simulate_gbm_path(const GbmModel& model,
                                         const paths::TimeGrid& grid,
                                         num::RngStream& rng,
                                         double tail_epsilon = 1.0);

// Builds the path from caller-supplied standard normal step innovations
// (enables common-refinement convergence studies).
paths::BenchmarkedPath simulate_gbm_path_from_normals(
    const GbmModel& model, const paths::TimeGrid& grid,
    const std::vector<double>& normals, double tail_epsilon = 1.0);

paths::BenchmarkedPath simulate_mmm_path(const MmmModel& model,
                                         const paths::TimeGrid& grid,
                                         num::RngStream& rng,
                                         double tail_epsilon = 1.0);

// Squared Bessel path of any dimension delta > 2 via exact noncentral
// chi-square transitions.
std::vector<double> simulate_besq_path(double delta, double x0,
                                       const paths::TimeGrid& grid,
                                       num::RngStream& rng);

}  // namespace htlab::sim
