// Shared element-wise cores for the batch kernels. Included by both the
// scalar and the AVX2 translation units: vector code mirrors these exact
// operation sequences, and remainder tails call them directly, so scalar
// and vector outputs are bitwise identical.
//
// exp/log/sincos follow the classic Cephes double-precision schemes
// (range reduction with hi/lo constant splits, rational or polynomial
// core), which deliver ~1-2 ulp over the ranges used here.

#include <bit>
#include <cmath>
#include <cstdint>

namespace htlab::kernels::detail {

inline constexpr double kExpHi = 709.7;       // clamp: exp(x) -> inf above
inline constexpr double kExpLo = -708.3;      // clamp: exp(x) -> 0 below
inline constexpr double kLog2E = 1.4426950408889634073599;
inline constexpr double kLn2Hi = 6.93145751953125e-1;
inline constexpr double kLn2Lo = 1.42860682030941723212e-6;

inline constexpr double kExpP0 = 1.26177193074810590878e-4;
inline constexpr double kExpP1 = 3.02994407707441961300e-2;
inline constexpr double kExpP2 = 9.99999999999999999910e-1;
inline constexpr double kExpQ0 = 3.00198505138664455042e-6;
inline constexpr double kExpQ1 = 2.52448340349684104192e-3;
inline constexpr double kExpQ2 = 2.27265548208155028766e-1;
inline constexpr double kExpQ3 = 2.00000000000000000005e0;

inline double exp_core(double x) {
  if (x > kExpHi) return std::numeric_limits<double>::infinity();
  if (x < kExpLo) return 0.0;
  double n = std::nearbyint(x * kLog2E);
  double r = std::fma(-n, kLn2Hi, x);
  r = std::fma(-n, kLn2Lo, r);
  double r2 = r * r;
  double p = std::fma(std::fma(kExpP0, r2, kExpP1), r2, kExpP2) * r;
  double q = std::fma(std::fma(std::fma(kExpQ0, r2, kExpQ1), r2, kExpQ2), r2,
                      kExpQ3);
  double e = std::fma(2.0, p / (q - p), 1.0);
  auto bits = static_cast<std::int64_t>(n);
  double scale = std::bit_cast<double>((bits + 1023) << 52);
  return e * scale;
}

inline constexpr double kSqrtHalf = 0.70710678118654752440;
inline constexpr double kLogP0 = 1.01875663804580931796e-4;
inline constexpr double kLogP1 = 4.97494994976747001425e-1;
inline constexpr double kLogP2 = 4.70579119878881725854e0;
inline constexpr double kLogP3 = 1.44989225341610930846e1;
inline constexpr double kLogP4 = 1.79368678507819816313e1;
inline constexpr double kLogP5 = 7.70838733755885391666e0;
inline constexpr double kLogQ0 = 1.12873587189167450590e1;
inline constexpr double kLogQ1 = 4.52279145837532221105e1;
inline constexpr double kLogQ2 = 8.29875266912776603211e1;
inline constexpr double kLogQ3 = 7.11544750618563894466e1;
inline constexpr double kLogQ4 = 2.31251620126765340583e1;
inline constexpr double kLn2LoNeg = -2.121944400546905827679e-4;
inline constexpr double kLn2HiShort = 0.693359375;

// log for normal positive doubles.
inline double log_core(double x) {
  auto bits = std::bit_cast<std::uint64_t>(x);
  int e = static_cast<int>((bits >> 52) & 0x7ff) - 1022;
  double m = std::bit_cast<double>((bits & 0x000fffffffffffffULL) |
                                   0x3fe0000000000000ULL);  // [0.5, 1)
  if (m < kSqrtHalf) {
    e -= 1;
    m = std::fma(2.0, m, -1.0);
  } else {
    m = m - 1.0;
  }
  double z = m * m;
  double p = kLogP0;
  p = std::fma(p, m, kLogP1);
  p = std::fma(p, m, kLogP2);
  p = std::fma(p, m, kLogP3);
  p = std::fma(p, m, kLogP4);
  p = std::fma(p, m, kLogP5);
  double q = m + kLogQ0;
  q = std::fma(q, m, kLogQ1);
  q = std::fma(q, m, kLogQ2);
  q = std::fma(q, m, kLogQ3);
  q = std::fma(q, m, kLogQ4);
  double ef = static_cast<double>(e);
  double y = z * m * (p / q);
  y = std::fma(ef, kLn2LoNeg, y);
  y = std::fma(-0.5, z, y);
  double r = m + y;
  return std::fma(ef, kLn2HiShort, r);
}

inline constexpr double kFourOverPi = 1.27323954473516268615;
inline constexpr double kDP1 = 7.85398125648498535156e-1;
inline constexpr double kDP2 = 3.77489470793079817668e-8;
inline constexpr double kDP3 = 2.69515142907905952645e-15;

inline constexpr double kSinC0 = 1.58962301576546568060e-10;
inline constexpr double kSinC1 = -2.50507477628578072866e-8;
inline constexpr double kSinC2 = 2.75573136213857245213e-6;
inline constexpr double kSinC3 = -1.98412698295895385996e-4;
inline constexpr double kSinC4 = 8.33333333332211858878e-3;
inline constexpr double kSinC5 = -1.66666666666666307295e-1;

inline constexpr double kCosC0 = -1.13585365213876817300e-11;
inline constexpr double kCosC1 = 2.08757008419747316778e-9;
inline constexpr double kCosC2 = -2.75573141792967388112e-7;
inline constexpr double kCosC3 = 2.48015872888517179954e-5;
inline constexpr double kCosC4 = -1.38888888888730564116e-3;
inline constexpr double kCosC5 = 4.16666666666665929218e-2;

// sin and cos for x in [0, 2*pi); enough for the Box-Muller angle.
inline void sincos_core(double x, double* s_out, double* c_out) {
  double y = std::floor(x * kFourOverPi);
  auto j = static_cast<std::int64_t>(y);
  if (j & 1) {
    j += 1;
    y += 1.0;
  }
  j &= 7;
  double z = std::fma(-y, kDP1, x);
  z = std::fma(-y, kDP2, z);
  z = std::fma(-y, kDP3, z);
  double zz = z * z;
  double sp = kSinC0;
  sp = std::fma(sp, zz, kSinC1);
  sp = std::fma(sp, zz, kSinC2);
  sp = std::fma(sp, zz, kSinC3);
  sp = std::fma(sp, zz, kSinC4);
  sp = std::fma(sp, zz, kSinC5);
  double sin_poly = std::fma(z * zz, sp, z);
  double cp = kCosC0;
  cp = std::fma(cp, zz, kCosC1);
  cp = std::fma(cp, zz, kCosC2);
  cp = std::fma(cp, zz, kCosC3);
  cp = std::fma(cp, zz, kCosC4);
  cp = std::fma(cp, zz, kCosC5);
  double cos_poly = std::fma(zz * zz, cp, std::fma(-0.5, zz, 1.0));

  double ssign = 1.0, csign = 1.0;
  std::int64_t js = j;
  if (js > 3) {
    js -= 4;
    ssign = -ssign;
    csign = -csign;
  }
  if (js > 1) csign = -csign;
  bool swap = (js == 1 || js == 2);
  *s_out = ssign * (swap ? cos_poly : sin_poly);
  *c_out = csign * (swap ? sin_poly : cos_poly);
}

inline constexpr double kTwoPi = 6.28318530717958647693;

inline void boxmuller_core(double u1, double u2, double* z0, double* z1) {
  double r = std::sqrt(-2.0 * log_core(u1));
  double s, c;
  sincos_core(u2 * kTwoPi, &s, &c);
  *z0 = r * c;
  *z1 = r * s;
}

inline double drift_step_core(double l, double z, double mu, double s) {
  return std::fma(s, z, l + mu);
}

inline double sum_sq4_core(double a, double b, double c, double d) {
  return std::fma(a, a, std::fma(b, b, std::fma(c, c, d * d)));
}

inline double bridge_max_core(double l0, double l1, double lnu, double var) {
  double d = l1 - l0;
  double arg = std::fma(d, d, -2.0 * var * lnu);
  return 0.5 * ((l0 + l1) + std::sqrt(arg));
}

}  // namespace htlab::kernels::detail
