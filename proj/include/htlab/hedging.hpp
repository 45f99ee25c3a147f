#pragma once

#include <vector>

#include "htlab/path_stats.hpp"

namespace htlab::hedge {

struct PutSpec {
  double strike = 1.0;
};

// Benchmarked value of the put on the global maximum,
//   V_t = 1_{Sigma < K} ((K - Sigma) - N ln(K / Sigma)).
// The equivalent unsimplified form is evaluated alongside and both must
// agree to 1e-12.
double put_on_max_value(double strike, double n_t, double sigma_t);

// Units of the benchmarked asset to hold: -1_{Sigma < K} ln(K / Sigma);
// the remainder of the hedge wealth sits in the GOP.
double put_hedge_units(double strike, double sigma_t);

struct HedgeLedger {
  paths::TimeGrid grid;                // rebalance grid
  std::vector<double> units_in_asset;  // h(Sigma) at each rebalance time
  std::vector<double> benchmarked_value;  // replication wealth
  std::vector<double> tracking_error;     // wealth - formula value
  double terminal_payoff_estimate = 0.0;  // (K - Sigma_T)^+
};

// Self-financing discrete hedge in benchmarked units along one path;
// rebalance times must be a subset of the path grid.
HedgeLedger hedge_backtest(double strike, const paths::BenchmarkedPath& path,
                           const paths::TimeGrid& rebalance);

// U_t = N_t + V_t; the protected portfolio never falls under N_t.
std::vector<double> protected_portfolio(const paths::BenchmarkedPath& path,
                                        double strike);

// Long-run floor of the protection: min_t U_t against (K - Sigma_T)^+.
struct ProtectionFloor {
  double min_u = 0.0;
  double terminal_floor = 0.0;  // (K - Sigma_T)^+
};
ProtectionFloor protection_floor(const paths::BenchmarkedPath& path,
                                 double strike);

}  // namespace htlab::hedge
