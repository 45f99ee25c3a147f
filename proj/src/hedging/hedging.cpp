#include "htlab/hedging.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace htlab::hedge {

double put_on_max_value(double strike, double n_t, double sigma_t) {
  if (!(strike > 0.0)) throw std::domain_error("put: strike must be > 0");
  if (!(n_t > 0.0) || !(sigma_t > 0.0) || n_t > sigma_t)
    throw std::domain_error("put: need 0 < n_t <= sigma_t");
  if (sigma_t >= strike) return 0.0;
  const double lg = std::log(strike / sigma_t);
  const double value = (strike - sigma_t) - n_t * lg;
  const double unsimplified =
      (strike - sigma_t) * (1.0 - n_t / sigma_t) +
      n_t * (strike / sigma_t - 1.0 - lg);
  if (std::abs(value - unsimplified) > 1e-12 * std::max(1.0, std::abs(value)))
    throw std::runtime_error("put_on_max_value: algebraic forms disagree");
  return value;
}

double put_hedge_units(double strike, double sigma_t) {
  if (!(strike > 0.0) || !(sigma_t > 0.0))
    throw std::domain_error("put_hedge_units: strike and sigma must be > 0");
  return sigma_t < strike ? -std::log(strike / sigma_t) : 0.0;
}

HedgeLedger hedge_backtest(double strike, const paths::BenchmarkedPath& path,
                           const paths::TimeGrid& rebalance) {
  if (path.n.size() != path.grid.size() || path.sigma.size() != path.n.size())
    throw std::invalid_argument("hedge_backtest: path not annotated");
  // map rebalance times onto path grid indices; must be nested
  std::vector<std::size_t> idx;
  idx.reserve(rebalance.size());
  std::size_t cursor = 0;
  for (double t : rebalance.times) {
    while (cursor < path.grid.size() &&
           path.grid.times[cursor] < t - 1e-12)
      ++cursor;
    if (cursor >= path.grid.size() ||
        std::abs(path.grid.times[cursor] - t) > 1e-12)
      throw std::invalid_argument(
          "hedge_backtest: rebalance grid is not nested in the path grid");
    idx.push_back(cursor);
  }

  HedgeLedger ledger;
  ledger.grid = rebalance;
  const std::size_t m = idx.size();
  ledger.units_in_asset.resize(m);
  ledger.benchmarked_value.resize(m);
  ledger.tracking_error.resize(m);
  double wealth = put_on_max_value(strike, path.n[idx[0]], path.sigma[idx[0]]);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t k = idx[i];
    ledger.units_in_asset[i] = put_hedge_units(strike, path.sigma[k]);
    ledger.benchmarked_value[i] = wealth;
    ledger.tracking_error[i] =
        wealth - put_on_max_value(strike, path.n[k], path.sigma[k]);
    if (i + 1 < m) {
      const std::size_t k1 = idx[i + 1];
      wealth += ledger.units_in_asset[i] * (path.n[k1] - path.n[k]);
    }
  }
  ledger.terminal_payoff_estimate =
      std::max(strike - path.sigma[idx.back()], 0.0);
  return ledger;
}

ProtectionFloor protection_floor(const paths::BenchmarkedPath& path,
                                 double strike) {
  const auto u = protected_portfolio(path, strike);
  ProtectionFloor f;
  f.min_u = *std::min_element(u.begin(), u.end());
  f.terminal_floor = std::max(strike - path.sigma.back(), 0.0);
  return f;
}

std::vector<double> protected_portfolio(const paths::BenchmarkedPath& path,
                                        double strike) {
  if (path.n.size() != path.sigma.size() || path.n.empty())
    throw std::invalid_argument("protected_portfolio: path not annotated");
  std::vector<double> u(path.n.size());
  for (std::size_t i = 0; i < path.n.size(); ++i) {
    u[i] = path.n[i] + put_on_max_value(strike, path.n[i], path.sigma[i]);
    if (u[i] < path.n[i])
      throw std::runtime_error("protected_portfolio: U fell under N");
  }
  return u;
}

}  // namespace htlab::hedge
