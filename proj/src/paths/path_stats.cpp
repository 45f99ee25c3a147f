#include "htlab/path_stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace htlab::paths {

TimeGrid TimeGrid::uniform(double horizon, double dt) {
  if (!(horizon > 0.0) || !(dt > 0.0))
    throw std::domain_error("TimeGrid::uniform: horizon and dt must be > 0");
  const auto steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
  TimeGrid g;
  g.times.resize(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i)
    g.times[i] = std::min(horizon, static_cast<double>(i) * dt);
  return g;
}

double TimeGrid::max_step() const {
  double m = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i)
    m = std::max(m, times[i] - times[i - 1]);
  return m;
}

void running_extrema(std::span<const double> n, std::vector<double>* sigma,
                     std::vector<double>* i_min) {
  if (n.empty()) throw std::invalid_argument("running_extrema: empty path");
  if (sigma) sigma->resize(n.size());
  if (i_min) i_min->resize(n.size());
  double mx = n[0], mn = n[0];
  for (std::size_t i = 0; i < n.size(); ++i) {
    mx = std::max(mx, n[i]);
    mn = std::min(mn, n[i]);
    if (sigma) (*sigma)[i] = mx;
    if (i_min) (*i_min)[i] = mn;
  }
}

std::vector<double> azema_process(std::span<const double> n,
                                  std::span<const double> sigma) {
  if (n.size() != sigma.size())
    throw std::invalid_argument("azema_process: size mismatch");
  std::vector<double> z(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) z[i] = n[i] / sigma[i];
  return z;
}

void annotate(BenchmarkedPath& path, double tail_epsilon) {
  running_extrema(path.n, &path.sigma, &path.i_min);
  path.z = azema_process(path.n, path.sigma);
  path.tail_epsilon = tail_epsilon;
  if (path.z.back() <= tail_epsilon) {
    path.g_hat = extract_honest_time(path.grid, path.n, path.sigma,
                                     tail_epsilon);
    path.g_valid = true;
  } else {
    path.g_valid = false;
  }
}

double extract_honest_time(const TimeGrid& grid, std::span<const double> n,
                           std::span<const double> sigma, double epsilon) {
  if (n.empty() || n.size() != grid.times.size() || n.size() != sigma.size())
    throw std::invalid_argument("extract_honest_time: size mismatch");
  const double z_T = n.back() / sigma.back();
  if (z_T > epsilon)
    throw TailBoundError(
        "extract_honest_time: Z at the horizon exceeds the tail bound; "
        "simulate a longer horizon",
        z_T, epsilon);
  std::size_t arg = 0;
  double mx = n[0];
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] >= mx) {
      mx = n[i];
      arg = i;
    }
  }
  return grid.times[arg];
}

double conditional_logmax(double n_t, double sigma_t) {
  if (!(n_t > 0.0) || !(sigma_t > 0.0) || n_t > sigma_t)
    throw std::domain_error("conditional_logmax: need 0 < n_t <= sigma_t");
  return n_t / sigma_t + std::log(sigma_t);
}

DoobMeyerDecomposition doob_meyer_check(const BenchmarkedPath& path) {
  const auto& n = path.n;
  const auto& sigma = path.sigma;
  if (n.empty() || n.size() != sigma.size())
    throw std::invalid_argument("doob_meyer_check: path not annotated");
  DoobMeyerDecomposition dm;
  if (!path.continuous_model)
    dm.warning =
        "doob_meyer_check: path comes from a jump model; the discrete "
        "identity Z = 1 + int dN/Sigma - ln Sigma is exact only between "
        "jumps";
  const std::size_t m = n.size();
  dm.martingale_part.resize(m);
  dm.increasing_part.resize(m);
  dm.reconstruction.resize(m);
  const double ls0 = std::log(sigma[0]);
  double mart = 0.0;
  dm.martingale_part[0] = 0.0;
  dm.increasing_part[0] = 0.0;
  dm.reconstruction[0] = 1.0;
  dm.sup_error = std::abs(1.0 - n[0] / sigma[0]);
  for (std::size_t i = 1; i < m; ++i) {
    mart += (n[i] - n[i - 1]) / sigma[i - 1];
    dm.martingale_part[i] = mart;
    dm.increasing_part[i] = std::log(sigma[i]) - ls0;
    dm.reconstruction[i] = 1.0 + mart - dm.increasing_part[i];
    dm.sup_error =
        std::max(dm.sup_error, std::abs(dm.reconstruction[i] - n[i] / sigma[i]));
  }
  return dm;
}

TimeChangeCheck time_change_check(std::span<const double> n) {
  if (n.empty()) throw std::invalid_argument("time_change_check: empty path");
  TimeChangeCheck tc;
  const std::size_t m = n.size();
  tc.d_path.resize(m);
  tc.qv_path.resize(m);
  double d = 0.0, qv = 0.0;
  tc.d_path[0] = 0.0;
  tc.qv_path[0] = 0.0;
  double best_drift = 0.0, best_n = n[0];
  std::size_t arg_drift = 0, arg_n = 0;
  tc.reconstruction_error = 0.0;
  for (std::size_t i = 1; i < m; ++i) {
    const double ret = (n[i] - n[i - 1]) / n[i - 1];
    d += ret;
    qv += ret * ret;
    tc.d_path[i] = d;
    tc.qv_path[i] = qv;
    const double drifted = d - 0.5 * qv;  // W_{<D>} - <D>/2 in grid time
    if (drifted >= best_drift) {
      best_drift = drifted;
      arg_drift = i;
    }
    if (n[i] >= best_n) {
      best_n = n[i];
      arg_n = i;
    }
    tc.reconstruction_error = std::max(
        tc.reconstruction_error, std::abs(n[0] * std::exp(drifted) - n[i]));
  }
  tc.g_index_time_change = arg_drift;
  tc.g_index_direct = arg_n;
  return tc;
}

}  // namespace htlab::paths
