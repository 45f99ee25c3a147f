#include "htlab/market.hpp"

#include "htlab/model_sim.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "htlab/errors.hpp"
#include "htlab/stats.hpp"

namespace htlab::market {

namespace {

std::vector<double> theta_from(const Matrix& b, const std::vector<double>& a,
                               double r) {
  std::vector<double> excess(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) excess[j] = a[j] - r;
  return num::solve_linear(b, excess);
}

}  // namespace

MarketConfig MarketConfig::constants(int m, int d, double r,
                                     std::vector<double> a, Matrix b,
                                     std::vector<double> h,
                                     std::vector<double> x0) {
  MarketConfig cfg;
  cfg.m = m;
  cfg.d = d;
  cfg.short_rate = [r](double) { return r; };
  cfg.appreciation = [a](double, const std::vector<double>&) { return a; };
  cfg.volatility = [b](double, const std::vector<double>&) { return b; };
  cfg.jump_intensity = [h](double, const std::vector<double>&) { return h; };
  double maj = 0.0;
  for (double v : h) maj = std::max(maj, v);
  cfg.intensity_majorant = maj;
  cfg.x0 = std::move(x0);
  return cfg;
}

MarketConfig MarketConfig::black_scholes(double r, double a, double sigma,
                                         double x0_savings, double x0_stock) {
  Matrix b(1);
  b(0, 0) = sigma;
  return constants(1, 1, r, {a}, b, {}, {x0_savings, x0_stock});
}

MarketConfig MarketConfig::pure_jump(double r, double a, double b, double h,
                                     double x0_savings, double x0_stock) {
  Matrix vol(1);
  vol(0, 0) = b;
  return constants(0, 1, r, {a}, vol, {h}, {x0_savings, x0_stock});
}

ValidationReport validate_config(const MarketConfig& cfg,
                                 const std::vector<ProbePoint>& probes) {
  if (probes.empty())
    throw std::invalid_argument("validate_config: need probe points");
  ValidationReport report;
  auto fail = [&](const std::string& assumption, double t) {
    std::ostringstream os;
    os << "probe t=" << t;
    report.issues.push_back({assumption, os.str()});
    report.ok = false;
  };
  if (cfg.m < 0 || cfg.d < std::max(cfg.m, 1))
    report.issues.push_back({"driver counts: need 0 <= m <= d, d >= 1", "config"}),
        report.ok = false;
  if (static_cast<int>(cfg.x0.size()) != cfg.d + 1)
    report.issues.push_back({"x0 must have d+1 entries", "config"}),
        report.ok = false;
  for (double v : cfg.x0)
    if (!(v > 0.0)) {
      report.issues.push_back({"initial account values must be > 0", "config"});
      report.ok = false;
      break;
    }
  if (!report.ok) return report;

  for (const auto& p : probes) {
    const double r = cfg.short_rate(p.t);
    const auto a = cfg.appreciation(p.t, p.state);
    const Matrix b = cfg.volatility(p.t, p.state);
    const auto h = cfg.jump_drivers() > 0
                       ? cfg.jump_intensity(p.t, p.state)
                       : std::vector<double>{};
    if (b.n != static_cast<std::size_t>(cfg.d)) {
      fail("volatility matrix must be d x d", p.t);
      continue;
    }
    if (static_cast<int>(h.size()) != cfg.jump_drivers()) {
      fail("jump intensity must have d-m entries", p.t);
      continue;
    }
    for (double hk : h) {
      if (!(hk > 0.0)) fail("jump intensities must be strictly positive", p.t);
      if (hk > cfg.intensity_majorant * (1.0 + 1e-12))
        fail("jump intensity exceeds the declared majorant", p.t);
    }
    if (!num::is_invertible(b)) {
      fail("generalized volatility matrix must be invertible", p.t);
      continue;
    }
    for (int k = 0; k < cfg.jump_drivers(); ++k) {
      const double root = std::sqrt(h[k]);
      for (int j = 0; j < cfg.d; ++j) {
        const double bjk = b(j, cfg.m + k);
        if (!(bjk > -root))
          fail("strict positivity: b^{j,k} > -sqrt(h^k) on jump columns", p.t);
        if (bjk > 0.0)
          fail("only downward jumps: b^{j,k} <= 0 on jump columns", p.t);
      }
    }
    const auto theta = theta_from(b, a, r);
    for (int k = 0; k < cfg.jump_drivers(); ++k) {
      if (!(std::sqrt(h[k]) > theta[cfg.m + k]))
        fail("no explosion: sqrt(h^k) > theta^k", p.t);
    }
  }
  return report;
}

std::vector<double> market_prices_of_risk(const MarketConfig& cfg, double t,
                                          const std::vector<double>& state) {
  const double r = cfg.short_rate(t);
  const auto a = cfg.appreciation(t, state);
  const Matrix b = cfg.volatility(t, state);
  auto theta = theta_from(b, a, r);
  // residual check: ||b theta - (a - r 1)|| <= 1e-12 ||a - r 1||
  double res = 0.0, rhs = 0.0;
  for (int j = 0; j < cfg.d; ++j) {
    double bt = 0.0;
    for (int k = 0; k < cfg.d; ++k) bt += b(j, k) * theta[k];
    res += (bt - (a[j] - r)) * (bt - (a[j] - r));
    rhs += (a[j] - r) * (a[j] - r);
  }
  if (res > 1e-24 * std::max(rhs, 1e-30) && res > 1e-28)
    throw std::runtime_error("market_prices_of_risk: solve residual too large");
  return theta;
}

DriverDraws simulate_drivers(const MarketConfig& cfg,
                             const paths::TimeGrid& grid,
                             num::RngStream& rng) {
  const std::size_t steps = grid.size() - 1;
  DriverDraws d;
  d.grid = grid;
  d.dw.assign(cfg.m, std::vector<double>(steps, 0.0));
  d.jump_candidates.assign(cfg.jump_drivers(), std::vector<int>(steps, 0));
  d.accept_u.assign(cfg.jump_drivers(),
                    std::vector<std::vector<double>>(steps));
  const int dj = cfg.jump_drivers();
  if (dj > 0 && !(cfg.intensity_majorant > 0.0))
    throw std::domain_error(
        "simulate_drivers: jump model needs a positive intensity majorant");
  for (std::size_t i = 0; i < steps; ++i) {
    const double dt = grid.times[i + 1] - grid.times[i];
    const double sdt = std::sqrt(dt);
    for (int k = 0; k < cfg.m; ++k) d.dw[k][i] = sdt * rng.gauss();
    if (dj == 0) continue;
    // the model assumes distinct jump drivers never fire together: re-draw
    // steps where two of them have candidates
    for (;;) {
      int firing = 0;
      for (int k = 0; k < dj; ++k) {
        d.jump_candidates[k][i] = static_cast<int>(
            num::sample_poisson(cfg.intensity_majorant * dt, rng));
        if (d.jump_candidates[k][i] > 0) ++firing;
      }
      if (firing <= 1) break;
    }
    for (int k = 0; k < dj; ++k) {
      auto& us = d.accept_u[k][i];
      us.resize(d.jump_candidates[k][i]);
      for (auto& u : us) u = rng.uniform_co();
    }
  }
  return d;
}

namespace {

struct StepCoefficients {
  double r;
  std::vector<double> a;
  Matrix b;
  std::vector<double> h;
  std::vector<double> theta;
  std::vector<int> dp;  // realized jumps this step
};

StepCoefficients step_coefficients(const MarketConfig& cfg,
                                   const DriverDraws& draws, std::size_t i,
                                   const std::vector<double>& state) {
  StepCoefficients c;
  const double t = draws.grid.times[i];
  c.r = cfg.short_rate(t);
  c.a = cfg.appreciation(t, state);
  c.b = cfg.volatility(t, state);
  c.h = cfg.jump_drivers() > 0 ? cfg.jump_intensity(t, state)
                               : std::vector<double>{};
  c.theta = theta_from(c.b, c.a, c.r);
  c.dp.assign(cfg.jump_drivers(), 0);
  for (int k = 0; k < cfg.jump_drivers(); ++k) {
    if (c.h[k] > cfg.intensity_majorant * (1.0 + 1e-12))
      throw AssumptionViolation(
          "simulate_accounts: intensity exceeded its declared majorant");
    const double ratio = c.h[k] / cfg.intensity_majorant;
    for (double u : draws.accept_u[k][i])
      if (u < ratio) ++c.dp[k];
  }
  return c;
}

}  // namespace

RealizedPath simulate_accounts(const MarketConfig& cfg,
                               const DriverDraws& draws) {
  const std::size_t steps = draws.grid.size() - 1;
  const int dj = cfg.jump_drivers();
  RealizedPath out;
  out.accounts.assign(cfg.d + 1, std::vector<double>(steps + 1, 0.0));
  out.dp.assign(dj, std::vector<int>(steps, 0));
  out.h.assign(dj, std::vector<double>(steps, 0.0));
  out.theta.assign(cfg.d, std::vector<double>(steps, 0.0));
  out.r.assign(steps, 0.0);
  std::vector<double> state = cfg.x0;
  for (int j = 0; j <= cfg.d; ++j) out.accounts[j][0] = state[j];

  for (std::size_t i = 0; i < steps; ++i) {
    const double dt = draws.grid.times[i + 1] - draws.grid.times[i];
    auto c = step_coefficients(cfg, draws, i, state);
    out.r[i] = c.r;
    for (int k = 0; k < cfg.d; ++k) out.theta[k][i] = c.theta[k];
    for (int k = 0; k < dj; ++k) {
      out.dp[k][i] = c.dp[k];
      out.h[k][i] = c.h[k];
    }
    // savings account: exact
    state[0] *= std::exp(c.r * dt);
    out.accounts[0][i + 1] = state[0];
    for (int j = 1; j <= cfg.d; ++j) {
      double drift = c.r;
      double diffusion = 0.0;
      double jump_mult = 1.0;
      for (int k = 0; k < cfg.d; ++k) {
        const double bjk = c.b(j - 1, k);
        if (k < cfg.m) {
          drift += bjk * c.theta[k] - 0.5 * bjk * bjk;
          diffusion += bjk * draws.dw[k][i];
        } else {
          const double root = std::sqrt(c.h[k - cfg.m]);
          drift += bjk * (c.theta[k] - root);
          const double factor = 1.0 + bjk / root;
          if (!(factor > 0.0))
            throw AssumptionViolation(
                "simulate_accounts: jump factor not positive (b <= -sqrt(h))");
          for (int n = 0; n < c.dp[k - cfg.m]; ++n) jump_mult *= factor;
        }
      }
      state[j] *= std::exp(drift * dt + diffusion) * jump_mult;
      if (!(state[j] > 0.0))
        throw std::runtime_error(
            "simulate_accounts: positivity invariant failed");
      out.accounts[j][i + 1] = state[j];
    }
  }
  return out;
}

std::vector<double> simulate_gop(const MarketConfig& cfg,
                                 const DriverDraws& draws,
                                 const RealizedPath& realized) {
  const std::size_t steps = draws.grid.size() - 1;
  std::vector<double> gop(steps + 1);
  gop[0] = cfg.x0[0];
  double value = gop[0];
  for (std::size_t i = 0; i < steps; ++i) {
    const double dt = draws.grid.times[i + 1] - draws.grid.times[i];
    double drift = realized.r[i];
    double diffusion = 0.0;
    double jump_mult = 1.0;
    for (int k = 0; k < cfg.d; ++k) {
      const double theta = realized.theta[k][i];
      if (k < cfg.m) {
        drift += 0.5 * theta * theta;
        diffusion += theta * draws.dw[k][i];
      } else {
        const double root = std::sqrt(realized.h[k - cfg.m][i]);
        if (!(root > theta))
          throw AssumptionViolation(
              "simulate_gop: sqrt(h) > theta violated along the path");
        const double c = theta / (1.0 - theta / root);
        drift += c * (theta - root);
        const double factor = 1.0 + c / root;
        for (int n = 0; n < realized.dp[k - cfg.m][i]; ++n)
          jump_mult *= factor;
      }
    }
    value *= std::exp(drift * dt + diffusion) * jump_mult;
    gop[i + 1] = value;
  }
  return gop;
}

Strategy gop_strategy(const MarketConfig& cfg) {
  Strategy s;
  s.fractions = [cfg](double t, const std::vector<double>& state) {
    const auto theta = market_prices_of_risk(cfg, t, state);
    const auto h = cfg.jump_drivers() > 0 ? cfg.jump_intensity(t, state)
                                          : std::vector<double>{};
    // target exposures psi_k = sum_j pi_j b^{j,k}; solve b^T pi_risky = psi
    std::vector<double> psi(cfg.d);
    for (int k = 0; k < cfg.d; ++k) {
      if (k < cfg.m) {
        psi[k] = theta[k];
      } else {
        const double root = std::sqrt(h[k - cfg.m]);
        psi[k] = theta[k] / (1.0 - theta[k] / root);
      }
    }
    const Matrix b = cfg.volatility(t, state);
    Matrix bt(b.n);
    for (std::size_t i = 0; i < b.n; ++i)
      for (std::size_t j = 0; j < b.n; ++j) bt(i, j) = b(j, i);
    auto risky = num::solve_linear(bt, psi);
    std::vector<double> pi(cfg.d + 1);
    double sum = 0.0;
    for (int j = 1; j <= cfg.d; ++j) {
      pi[j] = risky[j - 1];
      sum += pi[j];
    }
    pi[0] = 1.0 - sum;
    return pi;
  };
  return s;
}

std::vector<double> evolve_portfolio(const MarketConfig& cfg,
                                     const DriverDraws& draws,
                                     const RealizedPath& realized,
                                     const Strategy& strategy,
                                     double initial_wealth) {
  const std::size_t steps = draws.grid.size() - 1;
  if (!(initial_wealth > 0.0))
    throw std::invalid_argument("evolve_portfolio: initial wealth must be > 0");
  std::vector<double> port(steps + 1);
  double value = initial_wealth;
  port[0] = value;
  std::vector<double> state(cfg.d + 1);
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = draws.grid.times[i];
    const double dt = draws.grid.times[i + 1] - t;
    for (int j = 0; j <= cfg.d; ++j) state[j] = realized.accounts[j][i];
    const auto pi = strategy.fractions(t, state);
    if (pi.size() != static_cast<std::size_t>(cfg.d + 1))
      throw std::invalid_argument("evolve_portfolio: fractions must have d+1 entries");
    double sum = 0.0;
    for (double p : pi) sum += p;
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::invalid_argument(
          "evolve_portfolio: fractions must sum to 1 (within 1e-12)");
    const Matrix b = cfg.volatility(t, state);
    double drift = realized.r[i];
    double diffusion = 0.0;
    double jump_mult = 1.0;
    for (int k = 0; k < cfg.d; ++k) {
      double psi = 0.0;
      for (int j = 1; j <= cfg.d; ++j) psi += pi[j] * b(j - 1, k);
      const double theta = realized.theta[k][i];
      if (k < cfg.m) {
        drift += psi * theta - 0.5 * psi * psi;
        diffusion += psi * draws.dw[k][i];
      } else {
        const double root = std::sqrt(realized.h[k - cfg.m][i]);
        drift += psi * (theta - root);
        const double factor = 1.0 + psi / root;
        if (!(factor > 0.0))
          throw std::runtime_error(
              "evolve_portfolio: portfolio wiped out by a jump (psi <= "
              "-sqrt(h))");
        for (int n = 0; n < realized.dp[k - cfg.m][i]; ++n)
          jump_mult *= factor;
      }
    }
    value *= std::exp(drift * dt + diffusion) * jump_mult;
    port[i + 1] = value;
  }
  return port;
}

PathBundle simulate_path(const MarketConfig& cfg, const paths::TimeGrid& grid,
                         num::RngStream& rng) {
  auto draws = simulate_drivers(cfg, grid, rng);
  auto realized = simulate_accounts(cfg, draws);
  PathBundle bundle;
  bundle.grid = grid;
  const std::size_t steps = grid.size() - 1;
  bundle.wiener.assign(cfg.m, std::vector<double>(steps + 1, 0.0));
  for (int k = 0; k < cfg.m; ++k)
    for (std::size_t i = 0; i < steps; ++i)
      bundle.wiener[k][i + 1] = bundle.wiener[k][i] + draws.dw[k][i];
  const int dj = cfg.jump_drivers();
  bundle.jump_counts.assign(dj, std::vector<double>(steps + 1, 0.0));
  bundle.q.assign(dj, std::vector<double>(steps + 1, 0.0));
  for (int k = 0; k < dj; ++k) {
    for (std::size_t i = 0; i < steps; ++i) {
      const double dt = grid.times[i + 1] - grid.times[i];
      const double h = realized.h[k][i];
      bundle.jump_counts[k][i + 1] =
          bundle.jump_counts[k][i] + realized.dp[k][i];
      bundle.q[k][i + 1] =
          bundle.q[k][i] +
          (realized.dp[k][i] - h * dt) / std::sqrt(h);
    }
  }
  bundle.accounts = realized.accounts;
  bundle.gop = simulate_gop(cfg, draws, realized);
  bundle.theta = realized.theta;
  return bundle;
}

paths::BenchmarkedPath benchmark(const paths::TimeGrid& grid,
                                 const std::vector<double>& portfolio,
                                 const std::vector<double>& gop,
                                 double tail_epsilon, bool continuous_model) {
  if (portfolio.size() != gop.size() || portfolio.size() != grid.size())
    throw std::invalid_argument("benchmark: grid mismatch");
  paths::BenchmarkedPath p;
  p.grid = grid;
  p.continuous_model = continuous_model;
  p.n.resize(portfolio.size());
  for (std::size_t i = 0; i < portfolio.size(); ++i) {
    if (!(portfolio[i] > 0.0) || !(gop[i] > 0.0))
      throw std::invalid_argument("benchmark: paths must be strictly positive");
    p.n[i] = portfolio[i] / gop[i];
  }
  paths::annotate(p, tail_epsilon);
  return p;
}

std::vector<paths::BenchmarkedPath> simulate_mmm_benchmarked(
    const sim::MmmModel& params, const paths::TimeGrid& grid,
    std::uint64_t seed, std::size_t n_paths, double tail_epsilon,
    std::uint64_t stream_offset) {
  std::vector<paths::BenchmarkedPath> out;
  out.reserve(n_paths);
  for (std::size_t p = 0; p < n_paths; ++p) {
    num::RngStream rng(seed, stream_offset + p);
    out.push_back(sim::simulate_mmm_path(params, grid, rng, tail_epsilon));
  }
  return out;
}

PriceEstimate real_world_price(std::span<const double> benchmarked_payoffs,
                               double gop_t) {
  if (benchmarked_payoffs.empty())
    throw std::invalid_argument("real_world_price: empty sample");
  auto ms = num::mean_std_error(benchmarked_payoffs);
  return {gop_t * ms.mean, gop_t * ms.std_error};
}

}  // namespace htlab::market
