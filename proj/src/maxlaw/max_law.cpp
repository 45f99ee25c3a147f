#include "htlab/max_law.hpp"

#include <cmath>
#include <stdexcept>

#include "htlab/quadrature.hpp"

namespace htlab::maxlaw {

namespace {

void require_state(double n_t, double sigma_t) {
  if (!(n_t > 0.0) || !(sigma_t > 0.0) || n_t > sigma_t)
    throw std::domain_error("max law: need 0 < n_t <= sigma_t");
}

}  // namespace

MaxPayoffSpec put_payoff(double strike) {
  if (!(strike > 0.0)) throw std::domain_error("put_payoff: strike must be > 0");
  const double k = strike;
  MaxPayoffSpec s;
  s.label = "put";
  s.f = [k](double y) { return std::max(k - y, 0.0); };
  s.primitive = [k](double z) {
    return z < k ? k * z - 0.5 * z * z : 0.5 * k * k;
  };
  s.tail_integral = [k](double z) {
    return z < k ? k / z - 1.0 - std::log(k / z) : 0.0;
  };
  s.integrand_h = [k](double z) { return z < k ? -std::log(k / z) : 0.0; };
  return s;
}

MaxPayoffSpec indicator_payoff(double level) {
  if (!(level > 0.0))
    throw std::domain_error("indicator_payoff: level must be > 0");
  const double a = level;
  MaxPayoffSpec s;
  s.label = "indicator";
  s.f = [a](double y) { return y > a ? 1.0 : 0.0; };
  s.primitive = [a](double z) { return std::max(z - a, 0.0); };
  s.tail_integral = [a](double z) { return 1.0 / std::max(z, a); };
  s.integrand_h = [a](double z) {
    return z > a ? 0.0 : 1.0 / a;
  };
  return s;
}

MaxPayoffSpec power_payoff(double exponent) {
  if (!(exponent > -1.0) || !(exponent < 1.0) || exponent == 0.0)
    throw std::domain_error(
        "power_payoff: exponent must lie in (-1, 1) and be nonzero "
        "(p >= 1 has infinite expectation)");
  const double p = exponent;
  MaxPayoffSpec s;
  s.label = "power";
  s.f = [p](double y) { return std::pow(y, p); };
  s.primitive = [p](double z) { return std::pow(z, p + 1.0) / (p + 1.0); };
  s.tail_integral = [p](double z) { return std::pow(z, p - 1.0) / (1.0 - p); };
  s.integrand_h = [p](double z) {
    return std::pow(z, p - 1.0) * p / (1.0 - p);
  };
  return s;
}

MaxPayoffSpec log_payoff() {
  MaxPayoffSpec s;
  s.label = "log";
  s.f = [](double y) { return std::log(y); };
  s.primitive = [](double z) { return z > 0.0 ? z * std::log(z) - z : 0.0; };
  s.tail_integral = [](double z) { return (std::log(z) + 1.0) / z; };
  s.integrand_h = [](double z) { return 1.0 / z; };
  return s;
}

MaxPayoffSpec constant_payoff(double value) {
  MaxPayoffSpec s;
  s.label = "constant";
  s.f = [value](double) { return value; };
  s.primitive = [value](double z) { return value * z; };
  s.tail_integral = [value](double z) { return value / z; };
  s.integrand_h = [](double) { return 0.0; };
  return s;
}

MaxPayoffSpec generic_payoff(std::function<double(double)> f,
                             std::string label) {
  // Tail-integrability probe over a doubling sequence: the partial pieces
  // of int^inf f(y)/y^2 must decay, otherwise the expectation is infinite.
  auto piece = [&f](double lo, double hi) {
    return num::integrate([&f](double y) { return f(y) / (y * y); }, lo, hi,
                          1e-12)
        .value;
  };
  double total = 0.0;
  double prev = std::abs(piece(1.0, 2.0));
  total = prev;
  bool converged = false;
  for (int j = 1; j < 48; ++j) {
    const double lo = std::pow(2.0, j), hi = 2.0 * lo;
    const double cur = std::abs(piece(lo, hi));
    total += cur;
    if (cur <= 1e-12 * std::max(total, 1e-12)) {
      converged = true;
      break;
    }
    if (j > 8 && cur > 0.5 * prev && cur > 1e-10)
      throw InfiniteExpectationError(
          "generic_payoff '" + label +
          "': tail integral of f(y)/y^2 does not converge "
          "(call-type payoffs have infinite expected value)");
    prev = cur;
  }
  if (!converged && prev > 1e-10)
    throw InfiniteExpectationError(
        "generic_payoff '" + label + "': tail integral still growing");

  MaxPayoffSpec s;
  s.label = std::move(label);
  s.f = f;
  s.primitive = [f](double z) {
    if (z <= 0.0) return 0.0;
    return num::integrate(f, 0.0, z, 1e-12).value;
  };
  auto tail = [f](double z) {
    return num::integrate([f](double y) { return f(y) / (y * y); }, z,
                          num::kInf, 1e-12)
        .value;
  };
  s.tail_integral = tail;
  s.integrand_h = [f, tail](double z) { return tail(z) - f(z) / z; };
  return s;
}

MaxPayoffSpec payoff_by_name(const std::string& name, double parameter) {
  if (name == "put") return put_payoff(parameter);
  if (name == "indicator") return indicator_payoff(parameter);
  if (name == "power") return power_payoff(parameter);
  if (name == "log") return log_payoff();
  if (name == "constant") return constant_payoff(parameter);
  throw std::invalid_argument("unknown payoff: " + name);
}

double doob_tail(double x, double a) {
  if (!(x > 0.0) || !(a > 0.0))
    throw std::domain_error("doob_tail: x and a must be > 0");
  return std::min(x / a, 1.0);
}

double conditional_max_expectation(const MaxPayoffSpec& spec, double n_t,
                                   double sigma_t) {
  require_state(n_t, sigma_t);
  return spec.f(sigma_t) * (1.0 - n_t / sigma_t) +
         n_t * spec.tail_integral(sigma_t);
}

double conditional_max_expectation_uform(const MaxPayoffSpec& spec,
                                         double n_t, double sigma_t) {
  require_state(n_t, sigma_t);
  const double upper = n_t / sigma_t;
  const auto integral =
      num::integrate([&spec, n_t](double u) { return spec.f(n_t / u); }, 0.0,
                     upper, 1e-13);
  return spec.f(sigma_t) * (1.0 - upper) + integral.value;
}

double azema_yor_value(const MaxPayoffSpec& spec, double n_t, double sigma_t) {
  require_state(n_t, sigma_t);
  return spec.primitive(sigma_t) - spec.f(sigma_t) * (sigma_t - n_t);
}

std::vector<double> ay_integral_replay(const MaxPayoffSpec& spec,
                                       std::span<const double> n,
                                       std::span<const double> sigma) {
  if (n.empty() || n.size() != sigma.size())
    throw std::invalid_argument("ay_integral_replay: size mismatch");
  std::vector<double> replay(n.size());
  double acc = spec.primitive(sigma[0]);
  replay[0] = acc;
  for (std::size_t i = 1; i < n.size(); ++i) {
    acc += spec.f(sigma[i - 1]) * (n[i] - n[i - 1]);
    replay[i] = acc;
  }
  return replay;
}

double representation_integrand(const MaxPayoffSpec& spec, double z) {
  if (!(z > 0.0))
    throw std::domain_error("representation_integrand: z must be > 0");
  return spec.integrand_h(z);
}

std::vector<double> representation_replay(const MaxPayoffSpec& spec,
                                          std::span<const double> n,
                                          std::span<const double> sigma) {
  if (n.empty() || n.size() != sigma.size())
    throw std::invalid_argument("representation_replay: size mismatch");
  std::vector<double> replay(n.size());
  double acc = conditional_max_expectation(spec, n[0], sigma[0]);
  replay[0] = acc;
  for (std::size_t i = 1; i < n.size(); ++i) {
    acc += spec.integrand_h(sigma[i - 1]) * (n[i] - n[i - 1]);
    replay[i] = acc;
  }
  return replay;
}

}  // namespace htlab::maxlaw
