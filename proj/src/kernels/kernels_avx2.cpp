// AVX2+FMA variants of the batch kernels. Mirrors kernel_cores.inl
// operation-for-operation; remainder tails reuse the scalar cores, so the
// two tables agree bitwise on every input.

#include "htlab/kernels.hpp"

#if defined(HTLAB_HAVE_AVX2)

#include <immintrin.h>

#include <limits>

#include "kernel_cores.inl"

namespace htlab::kernels {
namespace {

using namespace detail;

inline __m256d set1(double v) { return _mm256_set1_pd(v); }

inline __m256d int64_to_pd(__m256i v) {
  // Valid for |v| < 2^51: offset into the double mantissa and subtract.
  const __m256i offset = _mm256_set1_epi64x(0x4338000000000000LL);  // 2^52+2^51
  __m256i shifted = _mm256_add_epi64(v, offset);
  return _mm256_sub_pd(_mm256_castsi256_pd(shifted),
                       _mm256_castsi256_pd(offset));
}

inline __m256d vexp_pd(__m256d x) {
  const __m256d over = _mm256_cmp_pd(x, set1(kExpHi), _CMP_GT_OQ);
  const __m256d under = _mm256_cmp_pd(x, set1(kExpLo), _CMP_LT_OQ);
  __m256d n = _mm256_round_pd(_mm256_mul_pd(x, set1(kLog2E)),
                              _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, set1(kLn2Hi), x);
  r = _mm256_fnmadd_pd(n, set1(kLn2Lo), r);
  __m256d r2 = _mm256_mul_pd(r, r);
  __m256d p = _mm256_fmadd_pd(set1(kExpP0), r2, set1(kExpP1));
  p = _mm256_fmadd_pd(p, r2, set1(kExpP2));
  p = _mm256_mul_pd(p, r);
  __m256d q = _mm256_fmadd_pd(set1(kExpQ0), r2, set1(kExpQ1));
  q = _mm256_fmadd_pd(q, r2, set1(kExpQ2));
  q = _mm256_fmadd_pd(q, r2, set1(kExpQ3));
  __m256d e = _mm256_fmadd_pd(set1(2.0), _mm256_div_pd(p, _mm256_sub_pd(q, p)),
                              set1(1.0));
  __m256i bits = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(n));
  bits = _mm256_slli_epi64(_mm256_add_epi64(bits, _mm256_set1_epi64x(1023)),
                           52);
  __m256d res = _mm256_mul_pd(e, _mm256_castsi256_pd(bits));
  res = _mm256_blendv_pd(res, set1(std::numeric_limits<double>::infinity()),
                         over);
  res = _mm256_blendv_pd(res, _mm256_setzero_pd(), under);
  return res;
}

inline __m256d vlog_pd(__m256d x) {
  const __m256i mant_mask = _mm256_set1_epi64x(0x000fffffffffffffLL);
  const __m256i half_bits = _mm256_set1_epi64x(0x3fe0000000000000LL);
  __m256i bits = _mm256_castpd_si256(x);
  __m256i e64 = _mm256_sub_epi64(
      _mm256_and_si256(_mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(0x7ff)),
      _mm256_set1_epi64x(1022));
  __m256d m = _mm256_castsi256_pd(
      _mm256_or_si256(_mm256_and_si256(bits, mant_mask), half_bits));
  __m256d small = _mm256_cmp_pd(m, set1(kSqrtHalf), _CMP_LT_OQ);
  e64 = _mm256_sub_epi64(
      e64, _mm256_and_si256(_mm256_castpd_si256(small), _mm256_set1_epi64x(1)));
  __m256d m_small = _mm256_fmadd_pd(set1(2.0), m, set1(-1.0));
  __m256d m_big = _mm256_sub_pd(m, set1(1.0));
  m = _mm256_blendv_pd(m_big, m_small, small);
  __m256d z = _mm256_mul_pd(m, m);
  __m256d p = set1(kLogP0);
  p = _mm256_fmadd_pd(p, m, set1(kLogP1));
  p = _mm256_fmadd_pd(p, m, set1(kLogP2));
  p = _mm256_fmadd_pd(p, m, set1(kLogP3));
  p = _mm256_fmadd_pd(p, m, set1(kLogP4));
  p = _mm256_fmadd_pd(p, m, set1(kLogP5));
  __m256d q = _mm256_add_pd(m, set1(kLogQ0));
  q = _mm256_fmadd_pd(q, m, set1(kLogQ1));
  q = _mm256_fmadd_pd(q, m, set1(kLogQ2));
  q = _mm256_fmadd_pd(q, m, set1(kLogQ3));
  q = _mm256_fmadd_pd(q, m, set1(kLogQ4));
  __m256d ef = int64_to_pd(e64);
  __m256d y = _mm256_mul_pd(_mm256_mul_pd(z, m), _mm256_div_pd(p, q));
  y = _mm256_fmadd_pd(ef, set1(kLn2LoNeg), y);
  y = _mm256_fmadd_pd(set1(-0.5), z, y);
  __m256d r = _mm256_add_pd(m, y);
  return _mm256_fmadd_pd(ef, set1(kLn2HiShort), r);
}

inline void sincos_pd(__m256d x, __m256d* s_out, __m256d* c_out) {
  const __m256i one64 = _mm256_set1_epi64x(1);
  __m256d y = _mm256_floor_pd(_mm256_mul_pd(x, set1(kFourOverPi)));
  __m256i j = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(y));
  __m256i odd = _mm256_cmpeq_epi64(_mm256_and_si256(j, one64), one64);
  j = _mm256_add_epi64(j, _mm256_and_si256(odd, one64));
  y = _mm256_add_pd(y, _mm256_and_pd(_mm256_castsi256_pd(odd), set1(1.0)));
  j = _mm256_and_si256(j, _mm256_set1_epi64x(7));
  __m256d z = _mm256_fnmadd_pd(y, set1(kDP1), x);
  z = _mm256_fnmadd_pd(y, set1(kDP2), z);
  z = _mm256_fnmadd_pd(y, set1(kDP3), z);
  __m256d zz = _mm256_mul_pd(z, z);
  __m256d sp = set1(kSinC0);
  sp = _mm256_fmadd_pd(sp, zz, set1(kSinC1));
  sp = _mm256_fmadd_pd(sp, zz, set1(kSinC2));
  sp = _mm256_fmadd_pd(sp, zz, set1(kSinC3));
  sp = _mm256_fmadd_pd(sp, zz, set1(kSinC4));
  sp = _mm256_fmadd_pd(sp, zz, set1(kSinC5));
  __m256d sin_poly = _mm256_fmadd_pd(_mm256_mul_pd(z, zz), sp, z);
  __m256d cp = set1(kCosC0);
  cp = _mm256_fmadd_pd(cp, zz, set1(kCosC1));
  cp = _mm256_fmadd_pd(cp, zz, set1(kCosC2));
  cp = _mm256_fmadd_pd(cp, zz, set1(kCosC3));
  cp = _mm256_fmadd_pd(cp, zz, set1(kCosC4));
  cp = _mm256_fmadd_pd(cp, zz, set1(kCosC5));
  __m256d cos_poly = _mm256_fmadd_pd(_mm256_mul_pd(zz, zz), cp,
                                     _mm256_fmadd_pd(set1(-0.5), zz, set1(1.0)));
  __m256i gt3 = _mm256_cmpgt_epi64(j, _mm256_set1_epi64x(3));
  __m256i js = _mm256_sub_epi64(
      j, _mm256_and_si256(gt3, _mm256_set1_epi64x(4)));
  __m256i gt1 = _mm256_cmpgt_epi64(js, one64);
  __m256i swap64 = _mm256_or_si256(_mm256_cmpeq_epi64(js, one64),
                                   _mm256_cmpeq_epi64(js, _mm256_set1_epi64x(2)));
  const __m256d signbit = set1(-0.0);
  __m256d swap = _mm256_castsi256_pd(swap64);
  __m256d ssign = _mm256_and_pd(_mm256_castsi256_pd(gt3), signbit);
  __m256d csign =
      _mm256_xor_pd(ssign, _mm256_and_pd(_mm256_castsi256_pd(gt1), signbit));
  __m256d sres = _mm256_blendv_pd(sin_poly, cos_poly, swap);
  __m256d cres = _mm256_blendv_pd(cos_poly, sin_poly, swap);
  *s_out = _mm256_xor_pd(sres, ssign);
  *c_out = _mm256_xor_pd(cres, csign);
}

void vexp_avx2(const double* x, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, vexp_pd(_mm256_loadu_pd(x + i)));
  for (; i < n; ++i) y[i] = exp_core(x[i]);
}

void vlog_avx2(const double* x, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, vlog_pd(_mm256_loadu_pd(x + i)));
  for (; i < n; ++i) y[i] = log_core(x[i]);
}

void vboxmuller_avx2(const double* u1, const double* u2, double* z0,
                     double* z1, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d r = _mm256_sqrt_pd(
        _mm256_mul_pd(set1(-2.0), vlog_pd(_mm256_loadu_pd(u1 + i))));
    __m256d s, c;
    sincos_pd(_mm256_mul_pd(_mm256_loadu_pd(u2 + i), set1(kTwoPi)), &s, &c);
    _mm256_storeu_pd(z0 + i, _mm256_mul_pd(r, c));
    _mm256_storeu_pd(z1 + i, _mm256_mul_pd(r, s));
  }
  for (; i < n; ++i) boxmuller_core(u1[i], u2[i], &z0[i], &z1[i]);
}

void drift_step_avx2(double* l, const double* z, double mu, double s,
                     std::size_t n) {
  const __m256d vmu = set1(mu), vs = set1(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d li = _mm256_add_pd(_mm256_loadu_pd(l + i), vmu);
    _mm256_storeu_pd(l + i, _mm256_fmadd_pd(vs, _mm256_loadu_pd(z + i), li));
  }
  for (; i < n; ++i) l[i] = drift_step_core(l[i], z[i], mu, s);
}

inline __m128i narrow_mask(__m256d mask) {
  __m128 lo = _mm_castsi128_ps(_mm256_castsi256_si128(_mm256_castpd_si256(mask)));
  __m128 hi = _mm_castsi128_ps(_mm256_extracti128_si256(_mm256_castpd_si256(mask), 1));
  return _mm_castps_si128(_mm_shuffle_ps(lo, hi, _MM_SHUFFLE(2, 0, 2, 0)));
}

void running_max_avx2(const double* l, double* m, std::int32_t* arg,
                      std::int32_t step, std::size_t n) {
  const __m128i vstep = _mm_set1_epi32(step);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d li = _mm256_loadu_pd(l + i);
    __m256d mi = _mm256_loadu_pd(m + i);
    __m256d ge = _mm256_cmp_pd(li, mi, _CMP_GE_OQ);
    _mm256_storeu_pd(m + i, _mm256_blendv_pd(mi, li, ge));
    __m128i ai = _mm_loadu_si128(reinterpret_cast<const __m128i*>(arg + i));
    ai = _mm_blendv_epi8(ai, vstep, narrow_mask(ge));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(arg + i), ai);
  }
  for (; i < n; ++i) {
    if (l[i] >= m[i]) {
      m[i] = l[i];
      arg[i] = step;
    }
  }
}

void running_min_avx2(const double* l, double* m, std::int32_t* arg,
                      std::int32_t step, std::size_t n) {
  const __m128i vstep = _mm_set1_epi32(step);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d li = _mm256_loadu_pd(l + i);
    __m256d mi = _mm256_loadu_pd(m + i);
    __m256d le = _mm256_cmp_pd(li, mi, _CMP_LE_OQ);
    _mm256_storeu_pd(m + i, _mm256_blendv_pd(mi, li, le));
    __m128i ai = _mm_loadu_si128(reinterpret_cast<const __m128i*>(arg + i));
    ai = _mm_blendv_epi8(ai, vstep, narrow_mask(le));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(arg + i), ai);
  }
  for (; i < n; ++i) {
    if (l[i] <= m[i]) {
      m[i] = l[i];
      arg[i] = step;
    }
  }
}

void sum_sq4_avx2(const double* a, const double* b, const double* c,
                  const double* d, double* r2, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d va = _mm256_loadu_pd(a + i);
    __m256d vb = _mm256_loadu_pd(b + i);
    __m256d vc = _mm256_loadu_pd(c + i);
    __m256d vd = _mm256_loadu_pd(d + i);
    __m256d acc = _mm256_mul_pd(vd, vd);
    acc = _mm256_fmadd_pd(vc, vc, acc);
    acc = _mm256_fmadd_pd(vb, vb, acc);
    acc = _mm256_fmadd_pd(va, va, acc);
    _mm256_storeu_pd(r2 + i, acc);
  }
  for (; i < n; ++i) r2[i] = sum_sq4_core(a[i], b[i], c[i], d[i]);
}

void bridge_max_avx2(const double* l0, const double* l1, const double* lnu,
                     double var, double* bmax, std::size_t n) {
  const __m256d c = set1(-2.0 * var);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d a = _mm256_loadu_pd(l0 + i);
    __m256d b = _mm256_loadu_pd(l1 + i);
    __m256d d = _mm256_sub_pd(b, a);
    __m256d arg =
        _mm256_fmadd_pd(d, d, _mm256_mul_pd(c, _mm256_loadu_pd(lnu + i)));
    __m256d s = _mm256_sqrt_pd(arg);
    __m256d out =
        _mm256_mul_pd(set1(0.5), _mm256_add_pd(_mm256_add_pd(a, b), s));
    _mm256_storeu_pd(bmax + i, out);
  }
  for (; i < n; ++i) bmax[i] = bridge_max_core(l0[i], l1[i], lnu[i], var);
}

}  // namespace

const KernelTable* avx2_table_impl() {
  static const KernelTable table = {
      "avx2",          vexp_avx2,       vlog_avx2,  vboxmuller_avx2,
      drift_step_avx2, running_max_avx2, running_min_avx2,
      sum_sq4_avx2,    bridge_max_avx2,
  };
  return &table;
}

}  // namespace htlab::kernels

#else

namespace htlab::kernels {
const KernelTable* avx2_table_impl() { return nullptr; }
}  // namespace htlab::kernels

#endif  // HTLAB_HAVE_AVX2
