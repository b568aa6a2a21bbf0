// AVX2 kernel variants. Compiled with -mavx2 (no -mfma) when the compiler
// supports it; selected at runtime only if the CPU reports AVX2. Must be
// bit-identical to the scalar reference kernels in kernels_scalar.cpp.

#include "levylab/kernels/kernels.hpp"
#include "levylab/kernels/vec.hpp"

#if defined(LEVYLAB_AVX2_TU) && defined(__AVX2__)

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <cstring>

namespace levylab::kernels {
namespace {

// Four Philox4x32-10 blocks at a time. Each __m256i lane (64-bit) carries one
// block's 32-bit word, zero-extended, so _mm256_mul_epu32 yields the full
// 32x32->64 product needed for mulhi/mullo.
struct Philox4 {
  __m256i y0, y1;  // per block: y0 = (w1<<32)|w0, y1 = (w3<<32)|w2
};

inline Philox4 philox4_blocks(uint64_t seed, uint64_t stream, uint64_t first_block) {
  const __m256i mask32 = _mm256_set1_epi64x(0xFFFFFFFFLL);
  const __m256i m0 = _mm256_set1_epi64x(0xD2511F53LL);
  const __m256i m1 = _mm256_set1_epi64x(0xCD9E8D57LL);
  const __m256i w0 = _mm256_set1_epi64x(0x9E3779B9LL);
  const __m256i w1 = _mm256_set1_epi64x(0xBB67AE85LL);

  __m256i blocks = _mm256_add_epi64(
      _mm256_set1_epi64x(static_cast<long long>(first_block)), _mm256_set_epi64x(3, 2, 1, 0));
  __m256i x0 = _mm256_and_si256(blocks, mask32);
  __m256i x1 = _mm256_srli_epi64(blocks, 32);
  __m256i x2 = _mm256_set1_epi64x(static_cast<long long>(stream & 0xFFFFFFFFULL));
  __m256i x3 = _mm256_set1_epi64x(static_cast<long long>(stream >> 32));
  __m256i k0 = _mm256_set1_epi64x(static_cast<long long>(seed & 0xFFFFFFFFULL));
  __m256i k1 = _mm256_set1_epi64x(static_cast<long long>(seed >> 32));

  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      k0 = _mm256_and_si256(_mm256_add_epi64(k0, w0), mask32);
      k1 = _mm256_and_si256(_mm256_add_epi64(k1, w1), mask32);
    }
    __m256i p0 = _mm256_mul_epu32(m0, x0);
    __m256i p1 = _mm256_mul_epu32(m1, x2);
    __m256i hi0 = _mm256_srli_epi64(p0, 32);
    __m256i lo0 = _mm256_and_si256(p0, mask32);
    __m256i hi1 = _mm256_srli_epi64(p1, 32);
    __m256i lo1 = _mm256_and_si256(p1, mask32);
    __m256i y0 = _mm256_xor_si256(_mm256_xor_si256(hi1, x1), k0);
    __m256i y2 = _mm256_xor_si256(_mm256_xor_si256(hi0, x3), k1);
    x0 = y0;
    x1 = lo1;
    x2 = y2;
    x3 = lo0;
  }
  Philox4 out;
  out.y0 = _mm256_or_si256(_mm256_slli_epi64(x1, 32), x0);
  out.y1 = _mm256_or_si256(_mm256_slli_epi64(x3, 32), x2);
  return out;
}

// interleave per-block pairs: (a0..a3, b0..b3) -> [a0,b0,a1,b1], [a2,b2,a3,b3]
inline void interleave_pd(__m256d a, __m256d b, __m256d& lo, __m256d& hi) {
  __m256d u = _mm256_unpacklo_pd(a, b);  // a0 b0 a2 b2
  __m256d v = _mm256_unpackhi_pd(a, b);  // a1 b1 a3 b3
  lo = _mm256_permute2f128_pd(u, v, 0x20);
  hi = _mm256_permute2f128_pd(u, v, 0x31);
}

inline void interleave_epi64(__m256i a, __m256i b, __m256i& lo, __m256i& hi) {
  __m256i u = _mm256_unpacklo_epi64(a, b);
  __m256i v = _mm256_unpackhi_epi64(a, b);
  lo = _mm256_permute2x128_si256(u, v, 0x20);
  hi = _mm256_permute2x128_si256(u, v, 0x31);
}

// Generic driver: produce per-block outputs for word indices [start,start+n)
// in groups of four blocks (8 words), slicing edges through a bounce buffer.
template <class Group>
inline void run_groups(uint64_t start, std::size_t n, Group&& group) {
  if (n == 0) return;
  uint64_t first_block = start >> 1;
  uint64_t last_block = (start + n - 1) >> 1;
  for (uint64_t gb = first_block; gb <= last_block; gb += 4) {
    // word indices covered by this group
    uint64_t w_begin = gb << 1;
    uint64_t covered = 8;
    group(gb, w_begin, covered, start, n);
  }
}

void fill_u64_avx2(uint64_t seed, uint64_t stream, uint64_t start, std::size_t n, uint64_t* out) {
  run_groups(start, n, [&](uint64_t gb, uint64_t w_begin, uint64_t covered, uint64_t s,
                           std::size_t count) {
    Philox4 p = philox4_blocks(seed, stream, gb);
    alignas(32) uint64_t buf[8];
    __m256i lo, hi;
    interleave_epi64(p.y0, p.y1, lo, hi);
    _mm256_store_si256(reinterpret_cast<__m256i*>(buf), lo);
    _mm256_store_si256(reinterpret_cast<__m256i*>(buf + 4), hi);
    uint64_t from = std::max(w_begin, s);
    uint64_t to = std::min(w_begin + covered, s + count);
    for (uint64_t w = from; w < to; ++w) out[w - s] = buf[w - w_begin];
  });
}

void fill_uniform_avx2(uint64_t seed, uint64_t stream, uint64_t start, std::size_t n,
                       double* out) {
  run_groups(start, n, [&](uint64_t gb, uint64_t w_begin, uint64_t covered, uint64_t s,
                           std::size_t count) {
    Philox4 p = philox4_blocks(seed, stream, gb);
    VAvx2 u0 = uniform_from_bits<VAvx2>({p.y0});
    VAvx2 u1 = uniform_from_bits<VAvx2>({p.y1});
    alignas(32) double buf[8];
    __m256d lo, hi;
    interleave_pd(u0.v, u1.v, lo, hi);
    _mm256_store_pd(buf, lo);
    _mm256_store_pd(buf + 4, hi);
    uint64_t from = std::max(w_begin, s);
    uint64_t to = std::min(w_begin + covered, s + count);
    for (uint64_t w = from; w < to; ++w) out[w - s] = buf[w - w_begin];
  });
}

void fill_normal_avx2(uint64_t seed, uint64_t stream, uint64_t start, std::size_t n, double* out) {
  run_groups(start, n, [&](uint64_t gb, uint64_t w_begin, uint64_t covered, uint64_t s,
                           std::size_t count) {
    Philox4 p = philox4_blocks(seed, stream, gb);
    VAvx2 u1 = uniform_from_bits<VAvx2>({p.y0});
    VAvx2 u2 = uniform_from_bits<VAvx2>({p.y1});
    VAvx2 z0, z1;
    box_muller(u1, u2, z0, z1);
    alignas(32) double buf[8];
    __m256d lo, hi;
    interleave_pd(z0.v, z1.v, lo, hi);
    _mm256_store_pd(buf, lo);
    _mm256_store_pd(buf + 4, hi);
    uint64_t from = std::max(w_begin, s);
    uint64_t to = std::min(w_begin + covered, s + count);
    for (uint64_t w = from; w < to; ++w) out[w - s] = buf[w - w_begin];
  });
}

inline double hsum_blocked(__m256d acc) {
  __m128d lo = _mm256_castpd256_pd128(acc);
  __m128d hi = _mm256_extractf128_pd(acc, 1);
  double a0 = _mm_cvtsd_f64(lo);
  double a1 = _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
  double a2 = _mm_cvtsd_f64(hi);
  double a3 = _mm_cvtsd_f64(_mm_unpackhi_pd(hi, hi));
  return (a0 + a1) + (a2 + a3);
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t main = n & ~std::size_t{3};
  for (std::size_t i = 0; i < main; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double total = hsum_blocked(acc);
  for (std::size_t i = main; i < n; ++i) total += x[i];
  return total;
}

double sumsq_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t main = n & ~std::size_t{3};
  for (std::size_t i = 0; i < main; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
  }
  double total = hsum_blocked(acc);
  for (std::size_t i = main; i < n; ++i) total += x[i] * x[i];
  return total;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t main = n & ~std::size_t{3};
  for (std::size_t i = 0; i < main; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  double total = hsum_blocked(acc);
  for (std::size_t i = main; i < n; ++i) total += x[i] * y[i];
  return total;
}

double max_abs_avx2(const double* x, std::size_t n) {
  const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7FFFFFFFFFFFFFFFLL));
  __m256d acc = _mm256_setzero_pd();
  std::size_t main = n & ~std::size_t{3};
  for (std::size_t i = 0; i < main; i += 4) {
    acc = _mm256_max_pd(acc, _mm256_and_pd(absmask, _mm256_loadu_pd(x + i)));
  }
  __m128d lo = _mm256_castpd256_pd128(acc);
  __m128d hi = _mm256_extractf128_pd(acc, 1);
  double a0 = _mm_cvtsd_f64(lo);
  double a1 = _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
  double a2 = _mm_cvtsd_f64(hi);
  double a3 = _mm_cvtsd_f64(_mm_unpackhi_pd(hi, hi));
  double total = std::max(std::max(a0, a1), std::max(a2, a3));
  for (std::size_t i = main; i < n; ++i) total = std::max(total, std::fabs(x[i]));
  return total;
}

}  // namespace

const Kernels* avx2_kernels() {
  if (!__builtin_cpu_supports("avx2")) return nullptr;
  static const Kernels k = {fill_u64_avx2, fill_uniform_avx2, fill_normal_avx2, sum_avx2,
                            sumsq_avx2,    dot_avx2,          max_abs_avx2};
  return &k;
}

}  // namespace levylab::kernels

#else  // no AVX2 code in this build

namespace levylab::kernels {
const Kernels* avx2_kernels() { return nullptr; }
}  // namespace levylab::kernels

#endif
