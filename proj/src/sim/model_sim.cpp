#include "htlab/model_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "htlab/kernels.hpp"
#include "htlab/parallel.hpp"

namespace htlab::sim {

namespace {

constexpr int kCompactEvery = 64;

template <class T>
void compact(std::vector<T>& v, const std::vector<char>& alive,
             std::size_t active) {
  std::size_t w = 0;
  for (std::size_t i = 0; i < active; ++i)
    if (alive[i]) {
      if (w != i) v[w] = std::move(v[i]);
      ++w;
    }
}

}  // namespace

double mmm_phi(const MmmModel& m, double t) {
  return m.alpha0 / (4.0 * m.eta) * (std::exp(m.eta * t) - 1.0);
}

double mmm_phi_inverse(const MmmModel& m, double phi) {
  return std::log(1.0 + 4.0 * m.eta * phi / m.alpha0) / m.eta;
}

// ---------------------------------------------------------------------------
// GBM summaries: the log path l = ln N has drift -2 sigma^2 and volatility
// 2 sigma. Running maxima are augmented with exact Brownian-bridge step
// maxima, so Sigma carries no discrete-monitoring bias; only the attainment
// time keeps grid resolution.
// ---------------------------------------------------------------------------

std::vector<PathSummary> simulate_gbm_summaries(const GbmModel& model,
                                                const GbmSummaryRequest& req,
                                                std::size_t n_paths,
                                                std::uint64_t seed,
                                                std::uint64_t stream_offset) {
  if (!(model.sigma > 0.0))
    throw std::domain_error("gbm summaries: sigma must be > 0");
  if (!(req.dt > 0.0) || !(req.epsilon > 0.0) || req.epsilon > 1.0)
    throw std::domain_error("gbm summaries: need dt > 0, 0 < epsilon <= 1");
  std::vector<PathSummary> out(n_paths);

  const double mu = -2.0 * model.sigma * model.sigma * req.dt;
  const double vol = 2.0 * model.sigma * std::sqrt(req.dt);
  const double var = vol * vol;
  const double deficit = -std::log(req.epsilon);  // accept when mx - l >= deficit
  const auto& K = kernels::active_table();
  const auto max_steps = static_cast<std::int64_t>(req.t_max / req.dt) + 1;

  parallel_for_blocks(n_paths, [&](std::size_t begin, std::size_t end) {
    const std::size_t m0 = end - begin;
    std::vector<double> l(m0, 0.0), mx(m0, 0.0), lprev(m0), u1(m0), u2(m0),
        u3(m0), z0(m0), z1(m0), lnu(m0), bmax(m0);
    std::vector<std::int32_t> arg(m0, 0);
    std::vector<num::RngStream> rng;
    std::vector<std::size_t> id(m0);
    std::vector<char> alive(m0, 1);
    rng.reserve(m0);
    for (std::size_t i = 0; i < m0; ++i) {
      id[i] = begin + i;
      rng.emplace_back(seed, stream_offset + begin + i);
    }
    std::size_t active = m0;
    std::size_t snap_cursor = 0;
    std::int64_t step = 0;

    auto finalize = [&](std::size_t i, bool accepted, double t_now) {
      PathSummary& s = out[id[i]];
      s.sigma_end = std::exp(mx[i]);
      s.n_end = std::exp(l[i]);
      s.z_end = std::exp(l[i] - mx[i]);
      s.g_hat = static_cast<double>(arg[i]) * req.dt;
      s.t_end = t_now;
      s.accepted = accepted;
    };

    while (active > 0) {
      for (int burst = 0; burst < kCompactEvery && step < max_steps; ++burst) {
        ++step;
        const double t = static_cast<double>(step) * req.dt;
        for (std::size_t i = 0; i < active; ++i) {
          u1[i] = rng[i].uniform_oc();
          u2[i] = rng[i].uniform_co();
          if (req.bridge_max) u3[i] = rng[i].uniform_oc();
        }
        K.vboxmuller(u1.data(), u2.data(), z0.data(), z1.data(), active);
        if (req.bridge_max) {
          std::memcpy(lprev.data(), l.data(), active * sizeof(double));
          K.drift_step(l.data(), z0.data(), mu, vol, active);
          K.vlog(u3.data(), lnu.data(), active);
          K.bridge_max(lprev.data(), l.data(), lnu.data(), var, bmax.data(),
                       active);
          K.running_max(bmax.data(), mx.data(), arg.data(),
                        static_cast<std::int32_t>(step), active);
        } else {
          K.drift_step(l.data(), z0.data(), mu, vol, active);
          K.running_max(l.data(), mx.data(), arg.data(),
                        static_cast<std::int32_t>(step), active);
        }
        while (snap_cursor < req.snapshot_times.size() &&
               t >= req.snapshot_times[snap_cursor] - 1e-12) {
          for (std::size_t i = 0; i < active; ++i)
            out[id[i]].snapshots.push_back(
                {t, std::exp(l[i]), std::exp(mx[i])});
          ++snap_cursor;
        }
      }
      const bool snaps_done = snap_cursor >= req.snapshot_times.size();
      const bool out_of_time = step >= max_steps;
      const double t_now = static_cast<double>(step) * req.dt;
      std::size_t survivors = 0;
      for (std::size_t i = 0; i < active; ++i) {
        const bool accept = snaps_done && (mx[i] - l[i] >= deficit);
        if (accept || out_of_time) {
          finalize(i, accept, t_now);
          alive[i] = 0;
        } else {
          alive[i] = 1;
          ++survivors;
        }
      }
      if (survivors != active) {
        compact(l, alive, active);
        compact(mx, alive, active);
        compact(arg, alive, active);
        compact(rng, alive, active);
        compact(id, alive, active);
      }
      active = survivors;
      if (out_of_time) break;
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Squared-Bessel engine (dims 3 and 4, coordinates representation) on a
// shared clock with affinely growing steps. Also powers the MMM through the
// phi time change. N = (x0 / R2)^nu; a new maximum of N is a new minimum of
// R2.
// ---------------------------------------------------------------------------

namespace {

struct BesqEngineRequest {
  int dim;
  double x0;
  double nu;
  double step_abs;
  double step_rel;
  double ratio_eps;   // accept when i_min / r2 <= ratio_eps
  double clock_max;
  std::vector<double> snapshot_clocks;
};

struct BesqLaneResult {
  double r2_end, i_end, clock_end;
  std::size_t arg_step;
  bool accepted;
};

// clock value at each step index; shared by all lanes.
std::vector<PathSummary> run_besq_engine(const BesqEngineRequest& req,
                                         std::size_t n_paths,
                                         std::uint64_t seed,
                                         std::uint64_t stream_offset) {
  if (req.dim != 3 && req.dim != 4)
    throw std::domain_error("besq engine: dim must be 3 or 4");
  std::vector<PathSummary> out(n_paths);
  const auto& K = kernels::active_table();
  const double sqrt_x0 = std::sqrt(req.x0);

  parallel_for_blocks(n_paths, [&](std::size_t begin, std::size_t end) {
    const std::size_t m0 = end - begin;
    std::vector<double> w0(m0, sqrt_x0), w1(m0, 0.0), w2(m0, 0.0), w3(m0, 0.0),
        r2(m0, req.x0), imin(m0, req.x0), u1(m0), u2(m0), za(m0), zb(m0),
        zc(m0), zd(m0);
    std::vector<std::int32_t> arg(m0, 0);
    std::vector<num::RngStream> rng;
    std::vector<std::size_t> id(m0);
    std::vector<char> alive(m0, 1);
    rng.reserve(m0);
    for (std::size_t i = 0; i < m0; ++i) {
      id[i] = begin + i;
      rng.emplace_back(seed, stream_offset + begin + i);
    }
    std::vector<double> clock_of_step = {0.0};
    std::size_t active = m0;
    std::size_t snap_cursor = 0;
    std::int64_t step = 0;
    double clock = 0.0;

    auto finalize = [&](std::size_t i, bool accepted, double clock_now) {
      PathSummary& s = out[id[i]];
      s.sigma_end = std::pow(req.x0 / imin[i], req.nu);
      s.n_end = std::pow(req.x0 / r2[i], req.nu);
      s.z_end = std::pow(imin[i] / r2[i], req.nu);
      s.g_hat = clock_of_step[static_cast<std::size_t>(arg[i])];
      s.t_end = clock_now;
      s.accepted = accepted;
    };

    while (active > 0) {
      for (int burst = 0; burst < kCompactEvery && clock < req.clock_max;
           ++burst) {
        ++step;
        double dt = req.step_abs + req.step_rel * clock;
        // land exactly on the next snapshot clock
        if (snap_cursor < req.snapshot_clocks.size())
          dt = std::min(dt, req.snapshot_clocks[snap_cursor] - clock);
        dt = std::max(dt, 1e-12);
        clock += dt;
        clock_of_step.push_back(clock);
        const double sdt = std::sqrt(dt);
        for (std::size_t i = 0; i < active; ++i) {
          u1[i] = rng[i].uniform_oc();
          u2[i] = rng[i].uniform_co();
        }
        K.vboxmuller(u1.data(), u2.data(), za.data(), zb.data(), active);
        K.drift_step(w0.data(), za.data(), 0.0, sdt, active);
        K.drift_step(w1.data(), zb.data(), 0.0, sdt, active);
        for (std::size_t i = 0; i < active; ++i) {
          u1[i] = rng[i].uniform_oc();
          u2[i] = rng[i].uniform_co();
        }
        K.vboxmuller(u1.data(), u2.data(), zc.data(), zd.data(), active);
        K.drift_step(w2.data(), zc.data(), 0.0, sdt, active);
        if (req.dim == 4) K.drift_step(w3.data(), zd.data(), 0.0, sdt, active);
        K.sum_sq4(w0.data(), w1.data(), w2.data(), w3.data(), r2.data(),
                  active);
        K.running_min(r2.data(), imin.data(), arg.data(),
                      static_cast<std::int32_t>(step), active);
        while (snap_cursor < req.snapshot_clocks.size() &&
               clock >= req.snapshot_clocks[snap_cursor] - 1e-12) {
          for (std::size_t i = 0; i < active; ++i)
            out[id[i]].snapshots.push_back(
                {clock, std::pow(req.x0 / r2[i], req.nu),
                 std::pow(req.x0 / imin[i], req.nu)});
          ++snap_cursor;
        }
      }
      const bool snaps_done = snap_cursor >= req.snapshot_clocks.size();
      const bool out_of_time = clock >= req.clock_max;
      std::size_t survivors = 0;
      for (std::size_t i = 0; i < active; ++i) {
        const bool accept = snaps_done && (imin[i] <= req.ratio_eps * r2[i]);
        if (accept || out_of_time) {
          finalize(i, accept, clock);
          alive[i] = 0;
        } else {
          alive[i] = 1;
          ++survivors;
        }
      }
      if (survivors != active) {
        compact(w0, alive, active);
        compact(w1, alive, active);
        compact(w2, alive, active);
        compact(w3, alive, active);
        compact(r2, alive, active);
        compact(imin, alive, active);
        compact(arg, alive, active);
        compact(rng, alive, active);
        compact(id, alive, active);
      }
      active = survivors;
      if (out_of_time) break;
    }
  });
  return out;
}

}  // namespace

std::vector<PathSummary> simulate_besq_summaries(const BesqModel& model,
                                                 const BesqSummaryRequest& req,
                                                 std::size_t n_paths,
                                                 std::uint64_t seed,
                                                 std::uint64_t stream_offset) {
  BesqEngineRequest er;
  er.dim = model.dim;
  er.x0 = model.x0;
  er.nu = model.nu();
  er.step_abs = req.step_abs;
  er.step_rel = req.step_rel;
  er.ratio_eps = std::pow(req.epsilon, 1.0 / model.nu());
  er.clock_max = req.clock_max;
  er.snapshot_clocks = req.snapshot_times;
  return run_besq_engine(er, n_paths, seed, stream_offset);
}

std::vector<PathSummary> simulate_mmm_summaries(const MmmModel& model,
                                                const BesqSummaryRequest& req,
                                                std::size_t n_paths,
                                                std::uint64_t seed,
                                                std::uint64_t stream_offset) {
  BesqEngineRequest er;
  er.dim = 4;
  er.x0 = model.x;
  er.nu = 1.0;
  er.step_abs = req.step_abs;
  er.step_rel = req.step_rel;
  er.ratio_eps = req.epsilon;
  er.clock_max = mmm_phi(model, req.clock_max);
  er.snapshot_clocks.reserve(req.snapshot_times.size());
  for (double t : req.snapshot_times)
    er.snapshot_clocks.push_back(mmm_phi(model, t));
  auto res = run_besq_engine(er, n_paths, seed, stream_offset);
  for (auto& s : res) {
    s.g_hat = mmm_phi_inverse(model, s.g_hat);
    s.t_end = mmm_phi_inverse(model, s.t_end);
    for (auto& snap : s.snapshots) snap.t = mmm_phi_inverse(model, snap.t);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Nested-MC continuation probabilities.
// ---------------------------------------------------------------------------

double gbm_new_max_probability(double z_state, double dt, double eps_cont,
                               std::size_t n_paths, std::uint64_t seed,
                               std::uint64_t stream_offset) {
  if (!(z_state > 0.0) || z_state > 1.0)
    throw std::domain_error("gbm_new_max_probability: need z in (0, 1]");
  if (z_state == 1.0) return 1.0;
  // Scale invariance: continuation of l = ln(N/Sigma_t) from ln z; a new
  // maximum is a crossing of 0. The drift/vol scale (sigma) only changes the
  // clock, not the crossing probability, so sigma = 1/2 (unit log-vol) is
  // used. Bridge maxima make the crossing detection exact.
  const double mu = -0.5 * dt;
  const double vol = std::sqrt(dt);
  const double var = vol * vol;
  const double l0 = std::log(z_state);
  const double fail_level = std::log(eps_cont);
  const auto& K = kernels::active_table();
  std::vector<char> success(n_paths, 0);

  parallel_for_blocks(n_paths, [&](std::size_t begin, std::size_t end) {
    const std::size_t m0 = end - begin;
    std::vector<double> l(m0, l0), lprev(m0), u1(m0), u2(m0), u3(m0), z0(m0),
        z1(m0), lnu(m0), bmax(m0), mx(m0, -1e300);
    std::vector<std::int32_t> arg(m0, 0);
    std::vector<num::RngStream> rng;
    std::vector<std::size_t> id(m0);
    std::vector<char> alive(m0, 1);
    rng.reserve(m0);
    for (std::size_t i = 0; i < m0; ++i) {
      id[i] = begin + i;
      rng.emplace_back(seed, stream_offset + begin + i);
    }
    std::size_t active = m0;
    std::int32_t step = 0;
    while (active > 0) {
      for (int burst = 0; burst < kCompactEvery; ++burst) {
        ++step;
        for (std::size_t i = 0; i < active; ++i) {
          u1[i] = rng[i].uniform_oc();
          u2[i] = rng[i].uniform_co();
          u3[i] = rng[i].uniform_oc();
        }
        K.vboxmuller(u1.data(), u2.data(), z0.data(), z1.data(), active);
        std::memcpy(lprev.data(), l.data(), active * sizeof(double));
        K.drift_step(l.data(), z0.data(), mu, vol, active);
        K.vlog(u3.data(), lnu.data(), active);
        K.bridge_max(lprev.data(), l.data(), lnu.data(), var, bmax.data(),
                     active);
        K.running_max(bmax.data(), mx.data(), arg.data(), step, active);
      }
      std::size_t survivors = 0;
      for (std::size_t i = 0; i < active; ++i) {
        if (mx[i] >= 0.0) {
          success[id[i]] = 1;
          alive[i] = 0;
        } else if (l[i] <= fail_level) {
          alive[i] = 0;
        } else {
          alive[i] = 1;
          ++survivors;
        }
      }
      if (survivors != active) {
        compact(l, alive, active);
        compact(mx, alive, active);
        compact(arg, alive, active);
        compact(rng, alive, active);
        compact(id, alive, active);
      }
      active = survivors;
    }
  });
  std::size_t hits = 0;
  for (char c : success) hits += c;
  return static_cast<double>(hits) / static_cast<double>(n_paths);
}

double besq_new_min_probability(const BesqModel& model, double r2_over_imin,
                                double eps_cont, std::size_t n_paths,
                                std::uint64_t seed,
                                std::uint64_t stream_offset) {
  if (!(r2_over_imin >= 1.0))
    throw std::domain_error("besq_new_min_probability: ratio must be >= 1");
  if (r2_over_imin == 1.0) return 1.0;
  if (model.dim != 3 && model.dim != 4)
    throw std::domain_error("besq_new_min_probability: dim must be 3 or 4");
  // Radial form: R = sqrt(R2) solves dR = (dim-1)/(2R) dt + dW, so the
  // barrier at R = 1 is one-dimensional and per-step Brownian-bridge
  // crossing probabilities remove the discrete-monitoring bias.
  const double nu = model.nu();
  const double fail_r = std::pow(eps_cont, -0.5 / nu);  // fail once R >= this
  const double r0 = std::sqrt(r2_over_imin);
  const double half_drift = 0.5 * (model.dim - 1);
  const auto& K = kernels::active_table();
  std::vector<char> success(n_paths, 0);

  parallel_for_blocks(n_paths, [&](std::size_t begin, std::size_t end) {
    const std::size_t m0 = end - begin;
    std::vector<double> r(m0, r0), u1(m0), u2(m0), u3(m0), z0(m0), z1(m0),
        lnu(m0);
    std::vector<num::RngStream> rng;
    std::vector<std::size_t> id(m0);
    std::vector<char> alive(m0, 1);
    rng.reserve(m0);
    for (std::size_t i = 0; i < m0; ++i) {
      id[i] = begin + i;
      rng.emplace_back(seed, stream_offset + begin + i);
    }
    std::size_t active = m0;
    double clock = 0.0;
    while (active > 0) {
      for (int burst = 0; burst < kCompactEvery; ++burst) {
        const double dt = 2.5e-5 + 2.5e-4 * clock;
        clock += dt;
        const double sdt = std::sqrt(dt);
        for (std::size_t i = 0; i < active; ++i) {
          u1[i] = rng[i].uniform_oc();
          u2[i] = rng[i].uniform_co();
          u3[i] = rng[i].uniform_oc();
        }
        K.vboxmuller(u1.data(), u2.data(), z0.data(), z1.data(), active);
        K.vlog(u3.data(), lnu.data(), active);
        for (std::size_t i = 0; i < active; ++i) {
          if (!alive[i]) continue;
          const double prev = r[i];
          // Heun drift: the 1/R repulsion bends noticeably over a step
          const double d1 = half_drift / prev;
          const double pred = std::max(prev + d1 * dt + sdt * z0[i], 0.05);
          const double next =
              prev + 0.5 * (d1 + half_drift / pred) * dt + sdt * z0[i];
          if (next <= 1.0) {
            success[id[i]] = 1;
            alive[i] = 0;
            continue;
          }
          // exact bridge-crossing test of the barrier at 1
          const double cross_log =
              -2.0 * (prev - 1.0) * (next - 1.0) / dt;
          if (lnu[i] < cross_log) {
            success[id[i]] = 1;
            alive[i] = 0;
            continue;
          }
          r[i] = next;
        }
      }
      std::size_t survivors = 0;
      for (std::size_t i = 0; i < active; ++i) {
        if (!alive[i]) continue;
        if (r[i] >= fail_r) {
          alive[i] = 0;
        } else {
          ++survivors;
        }
      }
      if (survivors != active) {
        compact(r, alive, active);
        compact(rng, alive, active);
        compact(id, alive, active);
        for (std::size_t i = 0; i < survivors; ++i) alive[i] = 1;
      }
      active = survivors;
    }
  });
  std::size_t hits = 0;
  for (char c : success) hits += c;
  return static_cast<double>(hits) / static_cast<double>(n_paths);
}

// ---------------------------------------------------------------------------
// Full-path simulators.
// ---------------------------------------------------------------------------

paths::BenchmarkedPath simulate_gbm_path_from_normals(
    const GbmModel& model, const paths::TimeGrid& grid,
    const std::vector<double>& normals, double tail_epsilon) {
  const std::size_t m = grid.size();
  if (normals.size() + 1 < m)
    throw std::invalid_argument("gbm path: needs one normal per step");
  paths::BenchmarkedPath path;
  path.grid = grid;
  path.n.resize(m);
  path.n[0] = 1.0;
  double l = 0.0;
  const double s2 = 2.0 * model.sigma * model.sigma;
  for (std::size_t i = 1; i < m; ++i) {
    const double dt = grid.times[i] - grid.times[i - 1];
    l += -s2 * dt + 2.0 * model.sigma * std::sqrt(dt) * normals[i - 1];
    path.n[i] = std::exp(l);
  }
  paths::annotate(path, tail_epsilon);
  return path;
}

paths::BenchmarkedPath simulate_gbm_path(const GbmModel& model,
                                         const paths::TimeGrid& grid,
                                         num::RngStream& rng,
                                         double tail_epsilon) {
  std::vector<double> z(grid.size() - 1);
  for (auto& v : z) v = rng.gauss();
  return simulate_gbm_path_from_normals(model, grid, z, tail_epsilon);
}

paths::BenchmarkedPath simulate_mmm_path(const MmmModel& model,
                                         const paths::TimeGrid& grid,
                                         num::RngStream& rng,
                                         double tail_epsilon) {
  const std::size_t m = grid.size();
  paths::BenchmarkedPath path;
  path.grid = grid;
  path.n.resize(m);
  double w[4] = {std::sqrt(model.x), 0.0, 0.0, 0.0};
  path.n[0] = 1.0;
  double phi_prev = 0.0;
  for (std::size_t i = 1; i < m; ++i) {
    const double phi = mmm_phi(model, grid.times[i]);
    const double sdt = std::sqrt(phi - phi_prev);
    phi_prev = phi;
    double r2 = 0.0;
    for (auto& c : w) {
      c += sdt * rng.gauss();
      r2 += c * c;
    }
    path.n[i] = model.x / r2;
  }
  paths::annotate(path, tail_epsilon);
  return path;
}

std::vector<double> simulate_besq_path(double delta, double x0,
                                       const paths::TimeGrid& grid,
                                       num::RngStream& rng) {
  if (!(delta > 2.0))
    throw std::domain_error("besq path: delta must exceed 2 (transience)");
  std::vector<double> r2(grid.size());
  r2[0] = x0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double dt = grid.times[i] - grid.times[i - 1];
    r2[i] = dt * num::sample_noncentral_chisq(delta, r2[i - 1] / dt, rng);
  }
  return r2;
}

}  // namespace htlab::sim
