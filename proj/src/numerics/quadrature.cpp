#include "htlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace htlab::num {

namespace {

// Kronrod-15 abscissae/weights on [-1,1] and the embedded Gauss-7 weights.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct GkEstimate {
  T value;
  double error;
};

template <class T, class F>
GkEstimate<T> gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  T fc = f(c);
  T result_gauss = kWg[3] * fc;
  T result_kronrod = kWgk[7] * fc;
  double result_abs = kWgk[7] * std::abs(fc);
  for (int j = 0; j < 7; ++j) {
    T f1 = f(c - h * kXgk[j]);
    T f2 = f(c + h * kXgk[j]);
    T sum = f1 + f2;
    result_kronrod += kWgk[j] * sum;
    result_abs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) result_gauss += kWg[j / 2] * sum;
  }
  result_kronrod *= h;
  result_gauss *= h;
  result_abs *= std::abs(h);
  double err = std::abs(result_kronrod - result_gauss);
  if (result_abs > 0.0 && err > 0.0) {
    double scaled = std::pow(200.0 * err / result_abs, 1.5);
    err = result_abs * std::min(1.0, scaled);
  }
  return {result_kronrod, err};
}

template <class T>
struct Interval {
  double a, b, error;
  T value;
};

template <class T, class F>
T adaptive_gk(const F& f, double a, double b, double tol, double* err_out,
              int* evals_out) {
  constexpr int kMaxIntervals = 2000;
  std::vector<Interval<T>> stack;
  auto first = gk15<T>(f, a, b);
  int evals = 15;
  stack.push_back({a, b, first.error, first.value});
  T total = first.value;
  double total_err = first.error;
  while (total_err > std::max(tol, 1e-300) &&
         total_err > 1e-15 * std::abs(total)) {
    if (static_cast<int>(stack.size()) >= kMaxIntervals) {
      if (err_out) *err_out = total_err;
      if (evals_out) *evals_out = evals;
      throw QuadratureError("adaptive quadrature: evaluation budget exceeded",
                            std::abs(total), total_err);
    }
    auto worst = std::max_element(stack.begin(), stack.end(),
                                  [](const Interval<T>& x, const Interval<T>& y) {
                                    return x.error < y.error;
                                  });
    Interval<T> iv = *worst;
    stack.erase(worst);
    double mid = 0.5 * (iv.a + iv.b);
    auto left = gk15<T>(f, iv.a, mid);
    auto right = gk15<T>(f, mid, iv.b);
    evals += 30;
    total += left.value + right.value - iv.value;
    total_err += left.error + right.error - iv.error;
    stack.push_back({iv.a, mid, left.error, left.value});
    stack.push_back({mid, iv.b, right.error, right.value});
    if (total_err < 0.0) total_err = 0.0;
  }
  if (err_out) *err_out = total_err;
  if (evals_out) *evals_out = evals;
  return total;
}

}  // namespace

QuadratureResult integrate_tanh_sinh(const std::function<double(double)>& f,
                                     double a, double b, double tol) {
  const double half = 0.5 * (b - a);
  const double kPiHalf = 1.57079632679489661923;
  // Node at parameter t: offset from the nearer endpoint is half*delta(t),
  // computed without cancellation so endpoint singularities stay resolved.
  auto eval_pair = [&](double t, int* evals) {
    double u = kPiHalf * std::sinh(t);
    double delta = 1.0 / (1.0 + std::exp(2.0 * u));  // (1 - tanh u)/2
    double w = kPiHalf * std::cosh(t) * 4.0 * delta * (1.0 - delta);
    double xl = a + half * 2.0 * delta;
    double xr = b - half * 2.0 * delta;
    *evals += (t == 0.0) ? 1 : 2;
    if (t == 0.0) return w * f(a + half);
    return w * (f(xl) + f(xr));
  };
  const double t_max = 6.0;  // delta underflows shortly after
  double h = 1.0;
  int evals = 0;
  double sum = eval_pair(0.0, &evals);
  for (double t = h; t <= t_max; t += h) sum += eval_pair(t, &evals);
  double prev = half * h * sum;
  double value = prev;
  double err = std::abs(prev);
  for (int level = 1; level <= 12; ++level) {
    h *= 0.5;
    double add = 0.0;
    for (double t = h; t <= t_max; t += 2.0 * h) add += eval_pair(t, &evals);
    value = 0.5 * prev + half * h * add;
    err = std::abs(value - prev);
    prev = value;
    if (err <= std::max(tol, 1e-15 * std::abs(value)) && level >= 3) {
      return {value, err, evals};
    }
  }
  if (err <= 10.0 * std::max(tol, std::abs(value) * 1e-12))
    return {value, err, evals};
  throw QuadratureError("tanh-sinh quadrature did not converge", value, err);
}

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double tol) {
  if (!(tol > 0.0)) throw std::domain_error("integrate: tol must be > 0");
  if (std::isinf(b)) {
    if (a > 0.0) {
      // y = 1/u fold of the tail. Adaptive GK handles interior kinks; the
      // tanh-sinh rule takes over when u = 0 carries a power singularity
      // (an integrand decaying slower than y^-2).
      auto g = [&](double u) {
        double y = 1.0 / u;
        return f(y) * y * y;
      };
      try {
        double err = 0.0;
        int evals = 0;
        double v = adaptive_gk<double>(g, 0.0, 1.0 / a, tol, &err, &evals);
        return {v, err, evals};
      } catch (const QuadratureError&) {
        return integrate_tanh_sinh(g, 0.0, 1.0 / a, tol);
      }
    }
    // Split off [a, 1] and fold the rest.
    QuadratureResult head = integrate(f, a, 1.0, 0.5 * tol);
    QuadratureResult tail = integrate(f, 1.0, kInf, 0.5 * tol);
    return {head.value + tail.value, head.error_estimate + tail.error_estimate,
            head.evaluations + tail.evaluations};
  }
  double err = 0.0;
  int evals = 0;
  double v = adaptive_gk<double>(f, a, b, tol, &err, &evals);
  return {v, err, evals};
}

std::complex<double> integrate_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    double tol, double* error_estimate) {
  int evals = 0;
  return adaptive_gk<std::complex<double>>(f, a, b, tol, error_estimate,
                                           &evals);
}

}  // namespace htlab::num
