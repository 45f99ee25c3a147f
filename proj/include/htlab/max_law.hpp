#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "htlab/errors.hpp"

namespace htlab::maxlaw {

// A payoff f on the global maximum of a benchmarked portfolio, together
// with its primitive F(z) = int_0^z f, the tail integral
// T(z) = int_z^infty f(y)/y^2 dy and the representation integrand
// h(z) = T(z) - f(z)/z. Registered payoffs carry closed forms; generic
// payoffs fall back to quadrature with a tail-integrability probe.
struct MaxPayoffSpec {
  std::function<double(double)> f;
  std::function<double(double)> primitive;
  std::function<double(double)> tail_integral;
  std::function<double(double)> integrand_h;
  std::string label;
};

MaxPayoffSpec put_payoff(double strike);
MaxPayoffSpec indicator_payoff(double level);      // 1_{(level, inf)}
MaxPayoffSpec power_payoff(double exponent);       // y^p, -1 < p < 1, p != 0
MaxPayoffSpec log_payoff();                        // ln y
MaxPayoffSpec constant_payoff(double value);
// Quadrature-backed payoff; construction probes int^inf f(y)/y^2 over a
// doubling sequence and throws InfiniteExpectationError when it diverges
// (the call-type case).
MaxPayoffSpec generic_payoff(std::function<double(double)> f,
                             std::string label);
// Registry lookup for the CLI: put/indicator/power/log/constant.
MaxPayoffSpec payoff_by_name(const std::string& name, double parameter);

// Doob's maximal identity: P(Sigma_inf > a) = (x/a) ^ 1 for N_0 = x.
double doob_tail(double x, double a);

// E(f(Sigma_inf) | F_t), y-integral form:
//   f(Sigma)(1 - n/Sigma) + n int_Sigma^inf f(y)/y^2 dy.
double conditional_max_expectation(const MaxPayoffSpec& spec, double n_t,
                                   double sigma_t);

// Same quantity through the other algebraic route,
//   f(Sigma)(1 - n/Sigma) + int_0^{n/Sigma} f(n/u) du,
// evaluated by quadrature; the two must agree to ~1e-12.
double conditional_max_expectation_uform(const MaxPayoffSpec& spec,
                                         double n_t, double sigma_t);

// Azema-Yor local martingale value X_t = F(Sigma) - f(Sigma)(Sigma - n).
double azema_yor_value(const MaxPayoffSpec& spec, double n_t, double sigma_t);

// Discrete replay of X_t = F(Sigma_0) + int_0^t f(Sigma_s) dN_s with
// left-endpoint evaluation; returns the replayed path.
std::vector<double> ay_integral_replay(const MaxPayoffSpec& spec,
                                       std::span<const double> n,
                                       std::span<const double> sigma);

double representation_integrand(const MaxPayoffSpec& spec, double z);

// Discrete replay of E(f(Sigma_inf)|F_t) = E f(Sigma_inf) + int h(Sigma) dN.
std::vector<double> representation_replay(const MaxPayoffSpec& spec,
                                          std::span<const double> n,
                                          std::span<const double> sigma);

}  // namespace htlab::maxlaw
