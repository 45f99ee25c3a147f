#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "htlab/model_sim.hpp"
#include "htlab/rng.hpp"

namespace htlab::laws {

// N_t = exp(2 sigma W_t - 2 sigma^2 t); the law of its honest time is
// sigma-scaled but otherwise universal.
struct GbmParams {
  double sigma = 0.2;
};

// Transient squared Bessel R2 of dimension delta > 2 started at x;
// N = (x / R2)^nu with nu = delta/2 - 1.
struct BesselParams {
  double delta = 4.0;
  double x = 1.0;
  double nu() const { return 0.5 * delta - 1.0; }
};

// General transient diffusion Y with generator
//   (G f)(y) = diffusion(y) f''(y) + drift(y) f'(y)
// and a differentiable scale function normalized to s(0) = -inf, s(inf) = 0,
// s < 0 increasing. N_t = s(Y_t) / s(x0).
struct ScaleDiffusion {
  std::function<double(double)> drift;
  std::function<double(double)> diffusion;
  std::function<double(double)> scale;
  std::function<double(double)> scale_prime;
  double x0 = 1.0;
};

// Built-in squared-Bessel instance: G = 2y d^2/dy^2 + delta d/dy,
// s(y) = -y^{-nu}.
ScaleDiffusion bessel_diffusion(double delta, double x0);

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

// E exp(-lambda g) = 2 / (1 + sqrt(1 + 2 lambda / sigma^2)), lambda >= 0.
double gbm_laplace(const GbmParams& p, double lambda);
std::complex<double> gbm_laplace(const GbmParams& p,
                                 std::complex<double> lambda);

// E exp(-lambda tau_a) = (1/a)^{sqrt(1/4 + lambda/(2 sigma^2)) + 1/2}, a >= 1.
double gbm_hitting_laplace(const GbmParams& p, double a, double lambda);

// Exact sampler: g has the law of T_{e/2} / sigma^2 where e ~ Exp(1) and
// T_a is the first hitting time of a by W_t + t (inverse Gaussian).
double sample_gbm_honest_time(const GbmParams& p, num::RngStream& rng);

// E exp(-lambda g) = int_1^inf E exp(-lambda tau_a) da / a for any model,
// given the hitting-time transform (a, lambda) -> E exp(-lambda tau_a).
double law_via_hitting(
    const std::function<double(double, double)>& hitting_transform,
    double lambda);

// Downward hitting transform of the squared Bessel benchmark,
//   E exp(-lambda tau_a) = K_nu(B) / (sqrt(a) K_nu(B a^{-1/(2 nu)})),
// B = sqrt(2 lambda x). The consistency chain law_via_hitting ->
// bessel_laplace and the Doob limit at lambda -> 0 pin the a-exponents.
double bessel_hitting_laplace(const BesselParams& p, double a, double lambda);

// E exp(-lambda g) = (2 nu K_nu(B) / B^nu) int_0^B u^{nu-1}/K_nu(u) du.
double bessel_laplace(const BesselParams& p, double lambda);
std::complex<double> bessel_laplace(const BesselParams& p,
                                    std::complex<double> lambda);

// delta = 3 closed density p(t) = (1 - exp(-x/2t)) / sqrt(2 pi x t).
double bessel3_density(double x, double t);

// P(g > t | F_t) = (I_t / R2_t)^nu.
double bessel_conditional_z(const BesselParams& p, double r2_t, double i_t);

// ---------------------------------------------------------------------------
// General diffusion route
// ---------------------------------------------------------------------------

// Decreasing positive solution of G phi = lambda phi, stored as log(phi)
// on a logarithmic grid (backward integration from y_max with the WKB
// boundary slope; normalization phi(y_max) = 1).
template <class T>
struct PhiSolutionT {
  double lambda_re = 0.0;
  std::complex<double> lambda;
  std::vector<double> w;  // ascending ln y grid
  std::vector<T> psi;     // log phi
  std::vector<T> q;       // d log phi / d ln y
  double y_max = 0.0;

  T log_phi(double y) const;
  T log_deriv(double y) const;  // d log phi / d ln y at y
};

using PhiSolution = PhiSolutionT<double>;

PhiSolution solve_phi_lambda(const ScaleDiffusion& diff, double lambda,
                             double y_max);

// E exp(-lambda g) = -int_0^{x0} (s'(u)/s(u)) (phi(x0)/phi(u)) du, with
// y_max doubled until the value is stable to 1e-6.
double diffusion_laplace(const ScaleDiffusion& diff, double lambda);
std::complex<double> diffusion_laplace(const ScaleDiffusion& diff,
                                       std::complex<double> lambda);

// ---------------------------------------------------------------------------
// Laws assembled per model
// ---------------------------------------------------------------------------

using LawModel = std::variant<GbmParams, BesselParams, ScaleDiffusion>;

// P(g <= t): closed density for delta = 3, fixed-Talbot CDF inversion of
// the model transform otherwise.
double honest_time_cdf(const LawModel& model, double t);

double law_laplace(const LawModel& model, double lambda);

struct McEstimate {
  double value = 0.0;      // clipped into [0, 1]
  double raw = 0.0;        // unclipped MC mean
  double std_error = 0.0;
  std::size_t n = 0;
};

// P(g <= t) = E ln Sigma_t, estimated by Monte Carlo on a simulatable model.
using SimLawModel =
    std::variant<sim::GbmModel, sim::BesqModel, sim::MmmModel>;
McEstimate cdf_via_logmax(const SimLawModel& model, double t,
                          std::size_t n_paths, std::uint64_t seed);

}  // namespace htlab::laws
