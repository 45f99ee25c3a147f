#include <limits>

#include "htlab/kernels.hpp"
#include "kernel_cores.inl"

namespace htlab::kernels {
namespace {

using namespace detail;

void vexp_scalar(const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = exp_core(x[i]);
}

void vlog_scalar(const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = log_core(x[i]);
}

void vboxmuller_scalar(const double* u1, const double* u2, double* z0,
                       double* z1, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    boxmuller_core(u1[i], u2[i], &z0[i], &z1[i]);
}

void drift_step_scalar(double* l, const double* z, double mu, double s,
                       std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    l[i] = drift_step_core(l[i], z[i], mu, s);
}

void running_max_scalar(const double* l, double* m, std::int32_t* arg,
                        std::int32_t step, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (l[i] >= m[i]) {
      m[i] = l[i];
      arg[i] = step;
    }
  }
}

void running_min_scalar(const double* l, double* m, std::int32_t* arg,
                        std::int32_t step, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (l[i] <= m[i]) {
      m[i] = l[i];
      arg[i] = step;
    }
  }
}

void sum_sq4_scalar(const double* a, const double* b, const double* c,
                    const double* d, double* r2, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    r2[i] = sum_sq4_core(a[i], b[i], c[i], d[i]);
}

void bridge_max_scalar(const double* l0, const double* l1, const double* lnu,
                       double var, double* bmax, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    bmax[i] = bridge_max_core(l0[i], l1[i], lnu[i], var);
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table = {
      "scalar",         vexp_scalar,       vlog_scalar,
      vboxmuller_scalar, drift_step_scalar, running_max_scalar,
      running_min_scalar, sum_sq4_scalar,   bridge_max_scalar,
  };
  return table;
}

}  // namespace htlab::kernels
