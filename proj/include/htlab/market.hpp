#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "htlab/linalg.hpp"
#include "htlab/model_sim.hpp"
#include "htlab/path_stats.hpp"
#include "htlab/rng.hpp"

namespace htlab::market {

using num::Matrix;

// Full description of the jump-diffusion market: m Wiener drivers, d - m
// normalized jump drivers, d risky primary security accounts plus the
// savings account. Coefficients are functions of (t, accounts state).
struct MarketConfig {
  int m = 1;
  int d = 1;
  std::function<double(double)> short_rate;
  std::function<std::vector<double>(double, const std::vector<double>&)>
      appreciation;  // a^j, j = 1..d
  std::function<Matrix(double, const std::vector<double>&)>
      volatility;  // b^{j,k}, d x d, rows j = accounts, cols k = drivers
  std::function<std::vector<double>(double, const std::vector<double>&)>
      jump_intensity;  // h^k > 0, k = m+1..d (size d - m)
  double intensity_majorant = 0.0;  // thinning bound, >= h everywhere
  std::vector<double> x0;           // d + 1 positive initial values

  int jump_drivers() const { return d - m; }

  // m = d = 1 continuous model with constant coefficients.
  static MarketConfig black_scholes(double r, double a, double sigma,
                                    double x0_savings = 1.0,
                                    double x0_stock = 1.0);
  // m = 0, d = 1 pure-jump model with constant coefficients.
  static MarketConfig pure_jump(double r, double a, double b, double h,
                                double x0_savings = 1.0,
                                double x0_stock = 1.0);
  // constant-coefficient general market.
  static MarketConfig constants(int m, int d, double r, std::vector<double> a,
                                Matrix b, std::vector<double> h,
                                std::vector<double> x0);
};

struct ProbePoint {
  double t = 0.0;
  std::vector<double> state;  // d + 1 account values
};

struct ValidationIssue {
  std::string assumption;
  std::string location;
};

struct ValidationReport {
  bool ok = true;
  std::vector<ValidationIssue> issues;
};

// Checks invertibility of b, strict positivity (b^{j,k} > -sqrt(h^k)),
// downward-jumps-only (b^{j,k} <= 0 on jump columns), no-explosion
// (sqrt(h^k) > theta^k) and basic parameter sanity at each probe point.
ValidationReport validate_config(const MarketConfig& cfg,
                                 const std::vector<ProbePoint>& probes);

// theta = b^{-1} (a - r 1).
std::vector<double> market_prices_of_risk(const MarketConfig& cfg, double t,
                                          const std::vector<double>& state);

// Raw driver material: Wiener increments plus jump candidates drawn at the
// declared majorant rate, with one acceptance uniform per candidate event.
// Simultaneous candidates across distinct jump drivers in one step are
// re-drawn. Thinning against the state-dependent intensity happens during
// account evolution, where the state is known.
struct DriverDraws {
  paths::TimeGrid grid;
  std::vector<std::vector<double>> dw;            // m x steps
  std::vector<std::vector<int>> jump_candidates;  // (d-m) x steps
  std::vector<std::vector<std::vector<double>>>
      accept_u;  // (d-m) x steps x candidate
};

DriverDraws simulate_drivers(const MarketConfig& cfg,
                             const paths::TimeGrid& grid, num::RngStream& rng);

// Accounts evolved by log-Euler on the continuous part (exact positivity)
// with multiplicative jump factors; realized jumps, intensities and market
// prices of risk along the path come back for reuse by the GOP and
// portfolio evolutions.
struct RealizedPath {
  std::vector<std::vector<double>> accounts;  // (d+1) x (steps+1)
  std::vector<std::vector<int>> dp;           // (d-m) x steps realized jumps
  std::vector<std::vector<double>> h;         // (d-m) x steps, left endpoint
  std::vector<std::vector<double>> theta;     // d x steps, left endpoint
  std::vector<double> r;                      // steps, left endpoint
};

RealizedPath simulate_accounts(const MarketConfig& cfg,
                               const DriverDraws& draws);

std::vector<double> simulate_gop(const MarketConfig& cfg,
                                 const DriverDraws& draws,
                                 const RealizedPath& realized);

// Self-financing portfolio in fractions of wealth; fractions must sum to 1
// at every evaluation (checked to 1e-12).
struct Strategy {
  std::function<std::vector<double>(double, const std::vector<double>&)>
      fractions;  // (t, accounts state) -> d+1 fractions
};

std::vector<double> evolve_portfolio(const MarketConfig& cfg,
                                     const DriverDraws& draws,
                                     const RealizedPath& realized,
                                     const Strategy& strategy,
                                     double initial_wealth = 1.0);

// Fractions replicating the GOP, derived from the GOP SDE coefficients.
Strategy gop_strategy(const MarketConfig& cfg);

// Everything simulated on one set of drivers.
struct PathBundle {
  paths::TimeGrid grid;
  std::vector<std::vector<double>> wiener;       // m cumulative paths
  std::vector<std::vector<double>> jump_counts;  // (d-m) cumulative p
  std::vector<std::vector<double>> q;            // (d-m) cumulative q
  std::vector<std::vector<double>> accounts;     // (d+1) paths
  std::vector<double> gop;
  std::vector<std::vector<double>> theta;  // d paths (left endpoint values)
};

PathBundle simulate_path(const MarketConfig& cfg, const paths::TimeGrid& grid,
                         num::RngStream& rng);

// N = portfolio / GOP with running statistics filled in.
paths::BenchmarkedPath benchmark(const paths::TimeGrid& grid,
                                 const std::vector<double>& portfolio,
                                 const std::vector<double>& gop,
                                 double tail_epsilon = 1.0,
                                 bool continuous_model = true);

// Benchmarked primary security accounts under the minimal market model:
// N_t = x / R2_{phi(t)} with R2 a dimension-4 squared Bessel. Each path gets
// its own stream (seed, stream_offset + index).
std::vector<paths::BenchmarkedPath> simulate_mmm_benchmarked(
    const sim::MmmModel& params, const paths::TimeGrid& grid,
    std::uint64_t seed, std::size_t n_paths, double tail_epsilon = 1.0,
    std::uint64_t stream_offset = 0);

struct PriceEstimate {
  double price = 0.0;
  double std_error = 0.0;
};

// Real-world pricing: price_t = gop_t * E[payoff / gop_tau].
PriceEstimate real_world_price(std::span<const double> benchmarked_payoffs,
                               double gop_t);

}  // namespace htlab::market
