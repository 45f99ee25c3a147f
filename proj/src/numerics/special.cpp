#include "htlab/special.hpp"

#include <cmath>
#include <stdexcept>

#include "htlab/quadrature.hpp"

namespace htlab::num {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEps = 1e-16;
constexpr int kMaxIter = 10000;

// Odd Taylor coefficients of 1/Gamma(1+x); resolve the small-order limit of
// [1/Gamma(1-mu) - 1/Gamma(1+mu)] / (2 mu) without cancellation.
constexpr double kGamOdd[8] = {0.5772156649015329,   -0.0420026350340952,
                               -0.0421977345555443,  0.0072189432466630,
                               -0.0002152416741149,  -0.0000201348547807,
                               0.0000011330272320,   0.0000000061160950};

// K_mu(x) and K_{mu+1}(x) for |mu| <= 0.5, 0 < x <= 2 (Temme's series).
void temme_series(double mu, double x, double* kmu, double* kmup1) {
  const double t_plus = 1.0 / std::tgamma(1.0 + mu);   // 1/Gamma(1+mu)
  const double t_minus = 1.0 / std::tgamma(1.0 - mu);  // 1/Gamma(1-mu)
  double g1;
  if (std::abs(mu) > 0.1) {
    g1 = (t_minus - t_plus) / (2.0 * mu);
  } else {
    const double mu2 = mu * mu;
    double s = 0.0;
    double p = 1.0;
    for (double c : kGamOdd) {
      s += c * p;
      p *= mu2;
    }
    g1 = -s;
  }
  const double g2 = 0.5 * (t_minus + t_plus);
  const double lr = std::log(2.0 / x);
  const double e = mu * lr;
  double fact = 1.0, smu = 1.0;
  if (mu != 0.0) {
    fact = mu * kPi / std::sin(mu * kPi);
    if (e != 0.0) smu = std::sinh(e) / e;
  }
  double f = fact * (g1 * std::cosh(e) + g2 * lr * smu);
  const double emu = std::exp(e);  // (2/x)^mu
  double p = 0.5 * emu / t_plus;
  double q = 0.5 / (emu * t_minus);
  const double cx = 0.25 * x * x;
  double ak = 1.0, bk = 1.0, ck = 1.0;
  double s1 = f, s2 = p;
  for (int it = 0; it < kMaxIter; ++it) {
    f = (ak * f + p + q) / (bk - mu * mu);
    p /= (ak - mu);
    q /= (ak + mu);
    ck *= cx / ak;
    const double d1 = ck * f;
    s1 += d1;
    const double d2 = ck * (p - ak * f);
    s2 += d2;
    bk += ak + ak + 1.0;
    ak += 1.0;
    if (std::abs(d1) < kEps * (std::abs(s1) + 1e-300) &&
        std::abs(d2) < kEps * (std::abs(s2) + 1e-300))
      break;
  }
  *kmu = s1;
  *kmup1 = s2 * (2.0 / x);
}

// K_mu(x), K_{mu+1}(x) for |mu| <= 0.5, x > 2 (Steed's CF2).
void steed_cf2(double mu, double x, double* kmu, double* kmup1) {
  const double mu2 = mu * mu;
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d, delh = d;
  double q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25 - mu2;
  double q = a1, c = a1, a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i <= kMaxIter; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) <= kEps) break;
  }
  h = a1 * h;
  const double kmu_v = std::sqrt(kPi / (2.0 * x)) * std::exp(-x) / s;
  *kmu = kmu_v;
  *kmup1 = kmu_v * (mu + x + 0.5 - h) / x;
}

}  // namespace

double bessel_k(double nu, double z) {
  if (!(z > 0.0)) throw std::domain_error("bessel_k: z must be > 0");
  if (!(nu >= 0.0) || !std::isfinite(nu))
    throw std::domain_error("bessel_k: nu must be finite and >= 0");
  if (z > 697.0)
    throw std::range_error(
        "bessel_k: underflow in the large-z regime K ~ sqrt(pi/2z) e^{-z}");

  const int n = static_cast<int>(nu + 0.5);
  const double mu = nu - n;  // in [-0.5, 0.5]
  double kmu, kmup1;
  if (z <= 2.0)
    temme_series(mu, z, &kmu, &kmup1);
  else
    steed_cf2(mu, z, &kmu, &kmup1);
  double km = kmu, kp = kmup1;
  double ord = mu;
  for (int i = 0; i < n; ++i) {
    const double next = km + (2.0 * (ord + 1.0) / z) * kp;
    km = kp;
    kp = next;
    ord += 1.0;
  }
  const double result = (n == 0) ? kmu : km;
  if (!std::isfinite(result))
    throw std::range_error(
        "bessel_k: overflow in the small-z regime K ~ Gamma(nu) 2^{nu-1} z^{-nu}");
  return result;
}

std::complex<double> bessel_k(double nu, std::complex<double> z) {
  if (!(z.real() > 0.0))
    throw std::domain_error("bessel_k(complex): Re z must be > 0");
  nu = std::abs(nu);
  const double az = std::abs(z);
  if (az >= 16.0) {
    // K_nu(z) ~ sqrt(pi/2z) e^{-z} sum_k a_k, a_k = a_{k-1}(4nu^2-(2k-1)^2)/(8kz)
    const double fournu2 = 4.0 * nu * nu;
    std::complex<double> term(1.0, 0.0), sum(1.0, 0.0);
    double prev = 1.0;
    for (int k = 1; k <= 40; ++k) {
      const double odd = 2.0 * k - 1.0;
      term *= (fournu2 - odd * odd) / (8.0 * k) / z;
      const double at = std::abs(term);
      if (at >= prev) break;  // asymptotic tail started to grow
      sum += term;
      prev = at;
      if (at < 1e-17 * std::abs(sum)) break;
    }
    return std::sqrt(kPi / (2.0 * z)) * std::exp(-z) * sum;
  }
  // Integral representation; truncate where exp(-Re z cosh t) cosh(nu t)
  // is below ~1e-20 of the peak.
  const double rez = z.real();
  double tmax = std::acosh(46.0 / rez + 1.0);
  for (int i = 0; i < 3; ++i)
    tmax = std::acosh((46.0 + nu * tmax) / rez + 1.0);
  auto integrand = [&](double t) {
    return std::exp(-z * std::cosh(t)) * std::cosh(nu * t);
  };
  return integrate_complex(integrand, 0.0, tmax, 1e-13);
}

}  // namespace htlab::num
