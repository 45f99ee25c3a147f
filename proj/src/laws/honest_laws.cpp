#include "htlab/honest_laws.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "htlab/errors.hpp"
#include "htlab/laplace.hpp"
#include "htlab/quadrature.hpp"
#include "htlab/special.hpp"
#include "htlab/stats.hpp"

namespace htlab::laws {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

ScaleDiffusion bessel_diffusion(double delta, double x0) {
  if (!(delta > 2.0))
    throw std::domain_error("bessel_diffusion: delta must exceed 2");
  if (!(x0 > 0.0)) throw std::domain_error("bessel_diffusion: x0 must be > 0");
  const double nu = 0.5 * delta - 1.0;
  ScaleDiffusion d;
  d.drift = [delta](double) { return delta; };
  d.diffusion = [](double y) { return 2.0 * y; };
  d.scale = [nu](double y) { return -std::pow(y, -nu); };
  d.scale_prime = [nu](double y) { return nu * std::pow(y, -nu - 1.0); };
  d.x0 = x0;
  return d;
}

// ---------------------------------------------------------------------------
// GBM
// ---------------------------------------------------------------------------

double gbm_laplace(const GbmParams& p, double lambda) {
  if (!(p.sigma > 0.0)) throw std::domain_error("gbm_laplace: sigma > 0");
  if (lambda < 0.0) throw std::domain_error("gbm_laplace: lambda >= 0");
  return 2.0 / (1.0 + std::sqrt(1.0 + 2.0 * lambda / (p.sigma * p.sigma)));
}

std::complex<double> gbm_laplace(const GbmParams& p,
                                 std::complex<double> lambda) {
  return 2.0 /
         (1.0 + std::sqrt(1.0 + 2.0 * lambda / (p.sigma * p.sigma)));
}

double gbm_hitting_laplace(const GbmParams& p, double a, double lambda) {
  if (!(p.sigma > 0.0))
    throw std::domain_error("gbm_hitting_laplace: sigma > 0");
  if (lambda < 0.0) throw std::domain_error("gbm_hitting_laplace: lambda >= 0");
  if (a < 1.0)
    throw std::domain_error(
        "gbm_hitting_laplace: a >= 1 (tau_a = 0 for a <= N_0)");
  const double expo =
      std::sqrt(0.25 + lambda / (2.0 * p.sigma * p.sigma)) + 0.5;
  return std::pow(1.0 / a, expo);
}

double sample_gbm_honest_time(const GbmParams& p, num::RngStream& rng) {
  const double level = 0.5 * rng.exponential();
  if (level <= 0.0) return 0.0;
  const double t =
      num::sample_inverse_gaussian(level, level * level, rng);
  return t / (p.sigma * p.sigma);
}

double law_via_hitting(
    const std::function<double(double, double)>& hitting_transform,
    double lambda) {
  // a = e^u; E exp(-lambda tau_a) <= 1/a bounds the tail by e^{-u}.
  auto res = num::integrate(
      [&](double u) { return hitting_transform(std::exp(u), lambda); }, 0.0,
      42.0, 1e-11);
  if (res.value < -1e-9 || res.value > 1.0 + 1e-6)
    throw std::runtime_error(
        "law_via_hitting: value escaped [0,1]; invalid hitting transform");
  return std::min(std::max(res.value, 0.0), 1.0);
}

// ---------------------------------------------------------------------------
// Squared Bessel
// ---------------------------------------------------------------------------

double bessel_hitting_laplace(const BesselParams& p, double a, double lambda) {
  const double nu = p.nu();
  if (!(nu > 0.0) || !(p.x > 0.0))
    throw std::domain_error("bessel_hitting_laplace: need delta > 2, x > 0");
  if (a < 1.0) throw std::domain_error("bessel_hitting_laplace: a >= 1");
  if (lambda < 0.0)
    throw std::domain_error("bessel_hitting_laplace: lambda >= 0");
  if (lambda == 0.0) return 1.0 / a;  // Doob limit
  const double b = std::sqrt(2.0 * lambda * p.x);
  return num::bessel_k(nu, b) /
         (std::sqrt(a) * num::bessel_k(nu, b * std::pow(a, -0.5 / nu)));
}

namespace {

// int_0^B u^{nu-1}/K_nu(u) du with the leading small-u behavior
// u^{2nu-1} 2^{1-nu}/Gamma(nu) integrated analytically and the remainder by
// quadrature; T is double or complex<double>, the path being the ray to B.
template <class T>
T bessel_inner_integral(double nu, T b) {
  const double gamma_nu = std::tgamma(nu);
  const double lead_coef = std::pow(2.0, 1.0 - nu) / gamma_nu;
  const T singular = lead_coef * std::pow(b, 2.0 * nu) / (2.0 * nu);
  auto remainder = [&](double tau) -> T {
    // below this the subtracted integrand contributes nothing and K_nu of
    // an astronomically small argument would overflow
    if (tau < 1e-60) return T(0.0);
    const T u = tau * b;
    const T lead = lead_coef * std::pow(u, 2.0 * nu - 1.0);
    return (std::pow(u, nu - 1.0) / num::bessel_k(nu, u) - lead) * b;
  };
  if constexpr (std::is_same_v<T, double>) {
    return singular + num::integrate_tanh_sinh(remainder, 0.0, 1.0, 1e-11).value;
  } else {
    return singular + num::integrate_complex(remainder, 1e-300, 1.0, 1e-11);
  }
}

}  // namespace

double bessel_laplace(const BesselParams& p, double lambda) {
  const double nu = p.nu();
  if (!(nu > 0.0) || !(p.x > 0.0))
    throw std::domain_error("bessel_laplace: need delta > 2, x > 0");
  if (!(lambda > 0.0)) throw std::domain_error("bessel_laplace: lambda > 0");
  const double b = std::sqrt(2.0 * lambda * p.x);
  const double inner = bessel_inner_integral<double>(nu, b);
  const double value =
      2.0 * nu * num::bessel_k(nu, b) / std::pow(b, nu) * inner;
  if (!(value > -1e-9) || value > 1.0 + 1e-7)
    throw std::runtime_error("bessel_laplace: value escaped [0,1]");
  return std::min(std::max(value, 0.0), 1.0);
}

std::complex<double> bessel_laplace(const BesselParams& p,
                                    std::complex<double> lambda) {
  const double nu = p.nu();
  const std::complex<double> b = std::sqrt(2.0 * lambda * p.x);
  const std::complex<double> inner =
      bessel_inner_integral<std::complex<double>>(nu, b);
  return 2.0 * nu * num::bessel_k(nu, b) / std::pow(b, nu) * inner;
}

double bessel3_density(double x, double t) {
  if (!(x > 0.0)) throw std::domain_error("bessel3_density: x > 0");
  if (!(t > 0.0)) throw std::domain_error("bessel3_density: t > 0");
  return (1.0 - std::exp(-x / (2.0 * t))) / std::sqrt(2.0 * kPi * x * t);
}

double bessel_conditional_z(const BesselParams& p, double r2_t, double i_t) {
  if (!(i_t > 0.0) || !(r2_t > 0.0) || i_t > r2_t)
    throw std::domain_error("bessel_conditional_z: need 0 < i_t <= r2_t");
  return std::pow(i_t / r2_t, p.nu());
}

// ---------------------------------------------------------------------------
// phi_lambda and the general-diffusion transform
// ---------------------------------------------------------------------------

namespace {

template <class T>
struct OdeState {
  T psi;
  T q;
};

// backward RK4 for psi_w = q, q_w = (lambda - a q / y) y^2 / b - q^2 + q
template <class T>
void phi_backward_solve(const ScaleDiffusion& diff, T lambda, double w_max,
                        double w_stop_floor, double psi_gap_target,
                        PhiSolutionT<T>* out) {
  const double h = 1e-3;
  auto rhs = [&](double w, const OdeState<T>& s) -> OdeState<T> {
    const double y = std::exp(w);
    const double b = diff.diffusion(y);
    const double a = diff.drift(y);
    if (!(b > 0.0))
      throw std::domain_error("solve_phi_lambda: diffusion must be positive");
    OdeState<T> d;
    d.psi = s.q;
    d.q = (lambda - a * s.q / y) * (y * y / b) - s.q * s.q + s.q;
    return d;
  };
  const double y_max = std::exp(w_max);
  OdeState<T> s;
  s.psi = T(0.0);
  s.q = -y_max * std::sqrt(lambda / diff.diffusion(y_max));
  std::vector<double> w_rev;
  std::vector<T> psi_rev, q_rev;
  const double w_x0 = std::log(diff.x0);
  double w = w_max;
  w_rev.push_back(w);
  psi_rev.push_back(s.psi);
  q_rev.push_back(s.q);
  T psi_at_x0 = T(0.0);
  bool seen_x0 = false;
  while (w > w_stop_floor) {
    const double step = -h;
    OdeState<T> k1 = rhs(w, s);
    OdeState<T> s2{s.psi + 0.5 * step * k1.psi, s.q + 0.5 * step * k1.q};
    OdeState<T> k2 = rhs(w + 0.5 * step, s2);
    OdeState<T> s3{s.psi + 0.5 * step * k2.psi, s.q + 0.5 * step * k2.q};
    OdeState<T> k3 = rhs(w + 0.5 * step, s3);
    OdeState<T> s4{s.psi + step * k3.psi, s.q + step * k3.q};
    OdeState<T> k4 = rhs(w + step, s4);
    s.psi += step / 6.0 * (k1.psi + 2.0 * k2.psi + 2.0 * k3.psi + k4.psi);
    s.q += step / 6.0 * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q);
    w += step;
    w_rev.push_back(w);
    psi_rev.push_back(s.psi);
    q_rev.push_back(s.q);
    if (!seen_x0 && w <= w_x0) {
      seen_x0 = true;
      psi_at_x0 = s.psi;
    }
    // stop once the transform integrand is fully suppressed below x0
    if (seen_x0 && w < w_x0 &&
        std::real(T(s.psi)) - std::real(T(psi_at_x0)) > psi_gap_target)
      break;
  }
  out->w.assign(w_rev.rbegin(), w_rev.rend());
  out->psi.assign(psi_rev.rbegin(), psi_rev.rend());
  out->q.assign(q_rev.rbegin(), q_rev.rend());
  out->y_max = y_max;
}

template <class T>
T hermite_eval(const std::vector<double>& w, const std::vector<T>& v,
               const std::vector<T>& d, double x) {
  if (w.empty()) throw std::runtime_error("phi: empty grid");
  if (x <= w.front()) {  // linear continuation with the boundary slope
    return v.front() + d.front() * (x - w.front());
  }
  if (x >= w.back()) return v.back() + d.back() * (x - w.back());
  auto it = std::upper_bound(w.begin(), w.end(), x);
  const std::size_t i1 = static_cast<std::size_t>(it - w.begin());
  const std::size_t i0 = i1 - 1;
  const double hh = w[i1] - w[i0];
  const double t = (x - w[i0]) / hh;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * v[i0] + hh * h10 * d[i0] + h01 * v[i1] + hh * h11 * d[i1];
}

}  // namespace

template <class T>
T PhiSolutionT<T>::log_phi(double y) const {
  return hermite_eval(w, psi, q, std::log(y));
}

template <class T>
T PhiSolutionT<T>::log_deriv(double y) const {
  // derivative grid interpolated linearly through the same Hermite basis
  if (w.empty()) throw std::runtime_error("phi: empty grid");
  const double x = std::log(y);
  if (x <= w.front()) return q.front();
  if (x >= w.back()) return q.back();
  auto it = std::upper_bound(w.begin(), w.end(), x);
  const std::size_t i1 = static_cast<std::size_t>(it - w.begin());
  const std::size_t i0 = i1 - 1;
  const double t = (x - w[i0]) / (w[i1] - w[i0]);
  return (1.0 - t) * q[i0] + t * q[i1];
}

template struct PhiSolutionT<double>;
template struct PhiSolutionT<std::complex<double>>;

PhiSolution solve_phi_lambda(const ScaleDiffusion& diff, double lambda,
                             double y_max) {
  if (!(lambda > 0.0))
    throw std::domain_error("solve_phi_lambda: lambda must be > 0");
  if (!(y_max > diff.x0))
    throw std::domain_error("solve_phi_lambda: y_max must exceed x0");
  PhiSolution phi;
  phi.lambda_re = lambda;
  phi.lambda = lambda;
  phi_backward_solve<double>(diff, lambda, std::log(y_max),
                             std::log(diff.x0) - 250.0, 60.0, &phi);
  // the decreasing solution has q < 0 throughout; contamination by the
  // increasing solution shows up as a sign flip
  for (double qv : phi.q)
    if (!(qv < 0.0))
      throw std::runtime_error(
          "solve_phi_lambda: non-decreasing solution detected; enlarge y_max");
  return phi;
}

namespace {

void validate_scale(const ScaleDiffusion& diff) {
  const double s_x = diff.scale(diff.x0);
  if (!(s_x < 0.0))
    throw std::domain_error("diffusion_laplace: scale must be negative");
  if (!(diff.scale_prime(diff.x0) > 0.0))
    throw std::domain_error("diffusion_laplace: scale must be increasing");
  double prev = std::abs(s_x);
  for (double mult : {1e2, 1e6, 1e10, 1e14}) {
    const double cur = std::abs(diff.scale(mult * diff.x0));
    if (!(cur < prev))
      throw std::domain_error(
          "diffusion_laplace: scale must increase toward 0 at infinity");
    prev = cur;
  }
  if (prev > 0.2 * std::abs(s_x))
    throw std::domain_error(
        "diffusion_laplace: scale does not vanish at infinity");
}

template <class T>
T diffusion_laplace_once(const ScaleDiffusion& diff, T lambda, double y_max) {
  PhiSolutionT<T> phi;
  phi.lambda = lambda;
  phi.lambda_re = std::real(std::complex<double>(lambda));
  phi_backward_solve<T>(diff, lambda, std::log(y_max),
                        std::log(diff.x0) - 250.0, 60.0, &phi);
  const T psi_x0 = phi.log_phi(diff.x0);
  const double w_lo = phi.w.front();
  const double w_hi = std::log(diff.x0);
  auto integrand = [&](double w) -> T {
    const double y = std::exp(w);
    const T ratio = std::exp(psi_x0 - hermite_eval(phi.w, phi.psi, phi.q, w));
    return -(diff.scale_prime(y) * y / diff.scale(y)) * ratio;
  };
  if constexpr (std::is_same_v<T, double>) {
    return num::integrate(integrand, w_lo, w_hi, 1e-10).value;
  } else {
    return num::integrate_complex(integrand, w_lo, w_hi, 1e-10);
  }
}

template <class T>
T diffusion_laplace_impl(const ScaleDiffusion& diff, T lambda) {
  validate_scale(diff);
  const double lam_scale =
      std::max(std::abs(std::complex<double>(lambda)), 1e-8);
  double y_max =
      std::max(16.0 * diff.x0, 16.0 * diff.diffusion(diff.x0) / lam_scale);
  T prev = T(0.0);
  for (int round = 0; round < 14; ++round) {
    T value = diffusion_laplace_once<T>(diff, lambda, y_max);
    if (round > 0 && std::abs(value - prev) <=
                         1e-6 * std::max(1e-9, std::abs(value)))
      return value;
    prev = value;
    y_max *= 2.0;
  }
  throw std::runtime_error(
      "diffusion_laplace: value did not stabilize under y_max doubling");
}

}  // namespace

double diffusion_laplace(const ScaleDiffusion& diff, double lambda) {
  if (!(lambda > 0.0))
    throw std::domain_error("diffusion_laplace: lambda must be > 0");
  const double v = diffusion_laplace_impl<double>(diff, lambda);
  if (v < -1e-6 || v > 1.0 + 1e-5)
    throw std::runtime_error("diffusion_laplace: value escaped [0,1]");
  return std::min(std::max(v, 0.0), 1.0);
}

std::complex<double> diffusion_laplace(const ScaleDiffusion& diff,
                                       std::complex<double> lambda) {
  return diffusion_laplace_impl<std::complex<double>>(diff, lambda);
}

// ---------------------------------------------------------------------------
// Assembled laws
// ---------------------------------------------------------------------------

double law_laplace(const LawModel& model, double lambda) {
  return std::visit(
      [&](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, GbmParams>) {
          return gbm_laplace(m, lambda);
        } else if constexpr (std::is_same_v<M, BesselParams>) {
          return bessel_laplace(m, lambda);
        } else {
          return diffusion_laplace(m, lambda);
        }
      },
      model);
}

double honest_time_cdf(const LawModel& model, double t) {
  if (!(t > 0.0)) throw std::domain_error("honest_time_cdf: t must be > 0");
  if (const auto* bp = std::get_if<BesselParams>(&model)) {
    if (std::abs(bp->delta - 3.0) < 1e-12) {
      // closed density route
      const double x = bp->x;
      auto res = num::integrate_tanh_sinh(
          [x](double s) { return bessel3_density(x, s); }, 0.0, t, 1e-9);
      return std::min(res.value, 1.0);
    }
  }
  num::LaplaceTransform transform;
  transform.domain_note = "honest-time law";
  transform.evaluator = [model](std::complex<double> s) {
    return std::visit(
        [&](const auto& m) -> std::complex<double> {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, GbmParams>) {
            return gbm_laplace(m, s);
          } else if constexpr (std::is_same_v<M, BesselParams>) {
            return bessel_laplace(m, s);
          } else {
            return diffusion_laplace(m, s);
          }
        },
        model);
  };
  const double v =
      num::invert_laplace(transform, t, num::InversionTarget::kCdf);
  return std::min(std::max(v, 0.0), 1.0);
}

McEstimate cdf_via_logmax(const SimLawModel& model, double t,
                          std::size_t n_paths, std::uint64_t seed) {
  if (t < 0.0) throw std::domain_error("cdf_via_logmax: t must be >= 0");
  McEstimate est;
  est.n = n_paths;
  if (t == 0.0) return est;  // Sigma_0 = N_0: P(g <= 0) = 0
  std::vector<double> ln_sigma(n_paths);
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, sim::GbmModel>) {
          sim::GbmSummaryRequest req;
          req.dt = std::min(0.01, t / 64.0);
          req.epsilon = 1.0;  // only the snapshot matters
          req.snapshot_times = {t};
          auto res = sim::simulate_gbm_summaries(m, req, n_paths, seed);
          for (std::size_t i = 0; i < n_paths; ++i)
            ln_sigma[i] = std::log(res[i].snapshots.at(0).sigma);
        } else {
          sim::BesqSummaryRequest req;
          req.epsilon = 1.0;
          req.snapshot_times = {t};
          if constexpr (std::is_same_v<M, sim::BesqModel>) {
            auto res = sim::simulate_besq_summaries(m, req, n_paths, seed);
            for (std::size_t i = 0; i < n_paths; ++i)
              ln_sigma[i] = std::log(res[i].snapshots.at(0).sigma);
          } else {
            auto res = sim::simulate_mmm_summaries(m, req, n_paths, seed);
            for (std::size_t i = 0; i < n_paths; ++i)
              ln_sigma[i] = std::log(res[i].snapshots.at(0).sigma);
          }
        }
      },
      model);
  auto ms = num::mean_std_error(ln_sigma);
  est.raw = ms.mean;
  est.std_error = ms.std_error;
  est.value = std::min(std::max(ms.mean, 0.0), 1.0);
  return est;
}

}  // namespace htlab::laws
