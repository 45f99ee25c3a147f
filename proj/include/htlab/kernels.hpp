#pragma once

#include <cstddef>
#include <cstdint>

namespace htlab::kernels {

// Batch kernels for the Monte Carlo inner loops. Every operation exists as a
// scalar reference implementation and, on x86-64 with AVX2+FMA, as a vector
// variant selected at runtime. Both variants perform the same arithmetic in
// the same order (explicit fused multiply-adds, identical polynomial
// evaluation, identical clamping), so a path's result does not depend on
// which implementation, or which lane position, processed it.
//
// vexp / vlog / vboxmuller are valid on the ranges the simulators produce:
// vexp for x in [-708.3, 709.7] (clamped to 0 / +inf outside), vlog for
// normal positive doubles, vboxmuller for u1 in (0,1] and u2 in [0,1).
struct KernelTable {
  const char* name;

  // y[i] = exp(x[i])
  void (*vexp)(const double* x, double* y, std::size_t n);

  // y[i] = log(x[i])
  void (*vlog)(const double* x, double* y, std::size_t n);

  // Box-Muller pair from two uniforms:
  //   r = sqrt(-2 log u1), z0[i] = r cos(2 pi u2), z1[i] = r sin(2 pi u2)
  void (*vboxmuller)(const double* u1, const double* u2, double* z0,
                     double* z1, std::size_t n);

  // l[i] += mu + s * z[i]
  void (*drift_step)(double* l, const double* z, double mu, double s,
                     std::size_t n);

  // if (l[i] >= m[i]) { m[i] = l[i]; arg[i] = step; }   (ties go to 'step')
  void (*running_max)(const double* l, double* m, std::int32_t* arg,
                      std::int32_t step, std::size_t n);

  // if (l[i] <= m[i]) { m[i] = l[i]; arg[i] = step; }
  void (*running_min)(const double* l, double* m, std::int32_t* arg,
                      std::int32_t step, std::size_t n);

  // r2[i] = a[i]^2 + b[i]^2 + c[i]^2 + d[i]^2
  void (*sum_sq4)(const double* a, const double* b, const double* c,
                  const double* d, double* r2, std::size_t n);

  // Exact maximum of a Brownian bridge over one step, given the endpoints
  // l0, l1, the step variance 'var' and lnu[i] = log of a uniform draw:
  //   bmax[i] = 0.5 * (l0 + l1 + sqrt((l1 - l0)^2 - 2 var lnu))
  void (*bridge_max)(const double* l0, const double* l1, const double* lnu,
                     double var, double* bmax, std::size_t n);
};

// Scalar reference kernels; always available.
const KernelTable& scalar_table();

// AVX2+FMA kernels, or nullptr when the build or the CPU lacks them.
const KernelTable* avx2_table();

// Runtime selection: AVX2 when available, otherwise scalar. The environment
// variable HTLAB_SIMD (values: "scalar", "avx2", "auto") overrides.
const KernelTable& active_table();

}  // namespace htlab::kernels
