#pragma once
// Lane abstraction shared by the scalar reference kernels and the SIMD
// kernels. All floating-point helpers below are written once against this
// interface and instantiated for both lanes, so results are bit-identical:
// only +,-,*,/,sqrt, compares/blends and exact bit manipulation are used
// (no FMA, no libm calls inside the shared code).

#include <bit>
#include <cmath>
#include <cstdint>

#if defined(LEVYLAB_AVX2_TU) && defined(__AVX2__)
#include <immintrin.h>
#endif

namespace levylab::kernels {

struct VScalar {
  static constexpr int width = 1;
  double v;

  static VScalar load(const double* p) { return {*p}; }
  void store(double* p) const { *p = v; }
  static VScalar broadcast(double x) { return {x}; }

  friend VScalar operator+(VScalar a, VScalar b) { return {a.v + b.v}; }
  friend VScalar operator-(VScalar a, VScalar b) { return {a.v - b.v}; }
  friend VScalar operator*(VScalar a, VScalar b) { return {a.v * b.v}; }
  friend VScalar operator/(VScalar a, VScalar b) { return {a.v / b.v}; }

  static VScalar sqrt(VScalar a) { return {std::sqrt(a.v)}; }
  static VScalar round_nearest(VScalar a) { return {std::nearbyint(a.v)}; }

  // Masks are all-ones / all-zero bit patterns stored in the same type.
  static VScalar cmp_ge(VScalar a, VScalar b) { return from_bits(a.v >= b.v ? ~0ULL : 0ULL); }
  static VScalar cmp_eq(VScalar a, VScalar b) { return from_bits(a.v == b.v ? ~0ULL : 0ULL); }
  static VScalar blend(VScalar mask, VScalar a, VScalar b) {
    // mask ? a : b, lane-wise on bits
    return from_bits((bits(a) & bits(mask)) | (bits(b) & ~bits(mask)));
  }

  static uint64_t bits(VScalar a) { return std::bit_cast<uint64_t>(a.v); }
  static VScalar from_bits(uint64_t b) { return {std::bit_cast<double>(b)}; }

  struct IVec {
    uint64_t v;
    friend IVec operator>>(IVec a, int k) { return {a.v >> k}; }
    friend IVec operator&(IVec a, IVec b) { return {a.v & b.v}; }
    friend IVec operator|(IVec a, IVec b) { return {a.v | b.v}; }
  };
  static IVec to_int(VScalar a) { return {bits(a)}; }
  static VScalar from_int(IVec a) { return from_bits(a.v); }
  static IVec int_broadcast(uint64_t x) { return {x}; }

  // Exact conversion of a uint64 lane value < 2^52 to double.
  static VScalar u52_to_double(IVec a) {
    VScalar magic = from_bits(0x4330000000000000ULL);  // 2^52
    return from_int({a.v | 0x4330000000000000ULL}) - magic;
  }
};

#if defined(LEVYLAB_AVX2_TU) && defined(__AVX2__)

struct VAvx2 {
  static constexpr int width = 4;
  __m256d v;

  static VAvx2 load(const double* p) { return {_mm256_loadu_pd(p)}; }
  void store(double* p) const { _mm256_storeu_pd(p, v); }
  static VAvx2 broadcast(double x) { return {_mm256_set1_pd(x)}; }

  friend VAvx2 operator+(VAvx2 a, VAvx2 b) { return {_mm256_add_pd(a.v, b.v)}; }
  friend VAvx2 operator-(VAvx2 a, VAvx2 b) { return {_mm256_sub_pd(a.v, b.v)}; }
  friend VAvx2 operator*(VAvx2 a, VAvx2 b) { return {_mm256_mul_pd(a.v, b.v)}; }
  friend VAvx2 operator/(VAvx2 a, VAvx2 b) { return {_mm256_div_pd(a.v, b.v)}; }

  static VAvx2 sqrt(VAvx2 a) { return {_mm256_sqrt_pd(a.v)}; }
  static VAvx2 round_nearest(VAvx2 a) {
    return {_mm256_round_pd(a.v, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC)};
  }

  static VAvx2 cmp_ge(VAvx2 a, VAvx2 b) { return {_mm256_cmp_pd(a.v, b.v, _CMP_GE_OQ)}; }
  static VAvx2 cmp_eq(VAvx2 a, VAvx2 b) { return {_mm256_cmp_pd(a.v, b.v, _CMP_EQ_OQ)}; }
  static VAvx2 blend(VAvx2 mask, VAvx2 a, VAvx2 b) {
    return {_mm256_blendv_pd(b.v, a.v, mask.v)};
  }

  struct IVec {
    __m256i v;
    friend IVec operator>>(IVec a, int k) { return {_mm256_srli_epi64(a.v, k)}; }
    friend IVec operator&(IVec a, IVec b) { return {_mm256_and_si256(a.v, b.v)}; }
    friend IVec operator|(IVec a, IVec b) { return {_mm256_or_si256(a.v, b.v)}; }
  };
  static IVec to_int(VAvx2 a) { return {_mm256_castpd_si256(a.v)}; }
  static VAvx2 from_int(IVec a) { return {_mm256_castsi256_pd(a.v)}; }
  static IVec int_broadcast(uint64_t x) { return {_mm256_set1_epi64x(static_cast<long long>(x))}; }

  static VAvx2 u52_to_double(IVec a) {
    const __m256i magic_i = _mm256_set1_epi64x(0x4330000000000000LL);
    __m256d magic = _mm256_castsi256_pd(magic_i);
    return {_mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(a.v, magic_i)), magic)};
  }
};

#endif  // LEVYLAB_AVX2_TU && __AVX2__

// ---------------------------------------------------------------------------
// Shared transcendental helpers (fdlibm-style reductions and polynomials).
// libm cannot be used here because the scalar and SIMD lanes must agree
// bitwise; these are accurate to ~1-2 ulp on the domains used below, which
// is far below the Monte Carlo resolution of anything built on top.
// ---------------------------------------------------------------------------

// Natural log for x in (2^-60, 2); assumes positive normal inputs.
template <class V>
inline V vlog(V x) {
  using I = typename V::IVec;
  const V ln2_hi = V::broadcast(6.93147180369123816490e-01);
  const V ln2_lo = V::broadcast(1.90821492927058770002e-10);
  const V lg1 = V::broadcast(6.666666666666735130e-01);
  const V lg2 = V::broadcast(3.999999999940941908e-01);
  const V lg3 = V::broadcast(2.857142874366239149e-01);
  const V lg4 = V::broadcast(2.222219843214978396e-01);
  const V lg5 = V::broadcast(1.818357216161805012e-01);
  const V lg6 = V::broadcast(1.531383769920937332e-01);
  const V lg7 = V::broadcast(1.479819860511658591e-01);

  I bits = V::to_int(x);
  I ebits = bits >> 52;
  V e = V::u52_to_double(ebits) - V::broadcast(1023.0);
  // mantissa remapped to [1,2)
  I mant = (bits & V::int_broadcast(0x000FFFFFFFFFFFFFULL)) | V::int_broadcast(0x3FF0000000000000ULL);
  V m = V::from_int(mant);
  // rescale to [sqrt(2)/2, sqrt(2))
  V msk = V::cmp_ge(m, V::broadcast(1.4142135623730951));
  m = V::blend(msk, m * V::broadcast(0.5), m);
  e = V::blend(msk, e + V::broadcast(1.0), e);

  V f = m - V::broadcast(1.0);
  V s = f / (V::broadcast(2.0) + f);
  V z = s * s;
  V w = z * z;
  V t1 = w * (lg2 + w * (lg4 + w * lg6));
  V t2 = z * (lg1 + w * (lg3 + w * (lg5 + w * lg7)));
  V r = t2 + t1;
  V hfsq = V::broadcast(0.5) * f * f;
  return e * ln2_hi - ((hfsq - (s * (hfsq + r) + e * ln2_lo)) - f);
}

// Simultaneous sin and cos for x in [0, 2*pi] (Cody-Waite two-part pi/2).
template <class V>
inline void vsincos(V x, V& sin_out, V& cos_out) {
  const V two_over_pi = V::broadcast(6.36619772367581382433e-01);
  const V pio2_1 = V::broadcast(1.57079632673412561417e+00);
  const V pio2_1t = V::broadcast(6.07710050650619224932e-11);

  const V s1 = V::broadcast(-1.66666666666666324348e-01);
  const V s2 = V::broadcast(8.33333333332248946124e-03);
  const V s3 = V::broadcast(-1.98412698298579493134e-04);
  const V s4 = V::broadcast(2.75573137070700676789e-06);
  const V s5 = V::broadcast(-2.50507602534068634195e-08);
  const V s6 = V::broadcast(1.58969099521155010221e-10);
  const V c1 = V::broadcast(4.16666666666666019037e-02);
  const V c2 = V::broadcast(-1.38888888888741095749e-03);
  const V c3 = V::broadcast(2.48015872894767294178e-05);
  const V c4 = V::broadcast(-2.75573143513906633035e-07);
  const V c5 = V::broadcast(2.08757232129817482790e-09);
  const V c6 = V::broadcast(-1.13596475577881948265e-11);

  V k = V::round_nearest(x * two_over_pi);  // in {0,...,4}
  V r = (x - k * pio2_1) - k * pio2_1t;
  V z = r * r;

  V ps = s2 + z * (s3 + z * (s4 + z * (s5 + z * s6)));
  V sin_r = r + r * (z * (s1 + z * ps));
  V pc = c2 + z * (c3 + z * (c4 + z * (c5 + z * c6)));
  V cos_r = V::broadcast(1.0) - z * V::broadcast(0.5) + z * (z * (c1 + z * pc));

  // fold k = 4 back to quadrant 0
  V m4 = V::cmp_eq(k, V::broadcast(4.0));
  k = V::blend(m4, V::broadcast(0.0), k);
  V q1 = V::cmp_eq(k, V::broadcast(1.0));
  V q2 = V::cmp_eq(k, V::broadcast(2.0));
  V q3 = V::cmp_eq(k, V::broadcast(3.0));

  V zero = V::broadcast(0.0);
  V nsin = zero - sin_r;
  V ncos = zero - cos_r;
  sin_out = V::blend(q1, cos_r, V::blend(q2, nsin, V::blend(q3, ncos, sin_r)));
  cos_out = V::blend(q1, nsin, V::blend(q2, ncos, V::blend(q3, sin_r, cos_r)));
}

// Two standard normals from two uniforms in (0,1) via Box-Muller.
template <class V>
inline void box_muller(V u1, V u2, V& z0, V& z1) {
  const V two_pi = V::broadcast(6.283185307179586476925286766559);
  V rad = V::sqrt(V::broadcast(-2.0) * vlog(u1));
  V s, c;
  vsincos(two_pi * u2, s, c);
  z0 = rad * c;
  z1 = rad * s;
}

// Uniform in (0,1) from the top 52 bits of a raw 64-bit word.
template <class V>
inline V uniform_from_bits(typename V::IVec raw) {
  V x = V::u52_to_double(raw >> 12);
  return (x + V::broadcast(0.5)) * V::broadcast(0x1.0p-52);
}

}  // namespace levylab::kernels
