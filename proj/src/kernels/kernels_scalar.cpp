// Scalar reference kernels. These define the semantics; the AVX2 variants in
// kernels_avx2.cpp must match them bit for bit.

#include <algorithm>
#include <cmath>
#include <cstring>

#include "levylab/kernels/kernels.hpp"
#include "levylab/kernels/vec.hpp"

namespace levylab::kernels {
namespace {

constexpr uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr uint32_t kPhiloxW1 = 0xBB67AE85u;

// Philox4x32-10: one block of four 32-bit words from (key = seed, counter =
// (block, stream)).
inline void philox_block(uint64_t seed, uint64_t stream, uint64_t block, uint32_t w[4]) {
  uint32_t x0 = static_cast<uint32_t>(block);
  uint32_t x1 = static_cast<uint32_t>(block >> 32);
  uint32_t x2 = static_cast<uint32_t>(stream);
  uint32_t x3 = static_cast<uint32_t>(stream >> 32);
  uint32_t k0 = static_cast<uint32_t>(seed);
  uint32_t k1 = static_cast<uint32_t>(seed >> 32);

  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      k0 += kPhiloxW0;
      k1 += kPhiloxW1;
    }
    uint64_t p0 = static_cast<uint64_t>(kPhiloxM0) * x0;
    uint64_t p1 = static_cast<uint64_t>(kPhiloxM1) * x2;
    uint32_t hi0 = static_cast<uint32_t>(p0 >> 32), lo0 = static_cast<uint32_t>(p0);
    uint32_t hi1 = static_cast<uint32_t>(p1 >> 32), lo1 = static_cast<uint32_t>(p1);
    uint32_t y0 = hi1 ^ x1 ^ k0;
    uint32_t y1 = lo1;
    uint32_t y2 = hi0 ^ x3 ^ k1;
    uint32_t y3 = lo0;
    x0 = y0;
    x1 = y1;
    x2 = y2;
    x3 = y3;
  }
  w[0] = x0;
  w[1] = x1;
  w[2] = x2;
  w[3] = x3;
}

// Two 64-bit words per block; word index i lives in block i/2, half i%2.
inline void block_u64(uint64_t seed, uint64_t stream, uint64_t block, uint64_t y[2]) {
  uint32_t w[4];
  philox_block(seed, stream, block, w);
  y[0] = (static_cast<uint64_t>(w[1]) << 32) | w[0];
  y[1] = (static_cast<uint64_t>(w[3]) << 32) | w[2];
}

void fill_u64_scalar(uint64_t seed, uint64_t stream, uint64_t start, std::size_t n, uint64_t* out) {
  if (n == 0) return;
  uint64_t idx = start;
  std::size_t written = 0;
  while (written < n) {
    uint64_t y[2];
    block_u64(seed, stream, idx >> 1, y);
    for (int h = static_cast<int>(idx & 1); h < 2 && written < n; ++h) {
      out[written++] = y[h];
      ++idx;
    }
  }
}

void fill_uniform_scalar(uint64_t seed, uint64_t stream, uint64_t start, std::size_t n,
                         double* out) {
  if (n == 0) return;
  uint64_t idx = start;
  std::size_t written = 0;
  while (written < n) {
    uint64_t y[2];
    block_u64(seed, stream, idx >> 1, y);
    for (int h = static_cast<int>(idx & 1); h < 2 && written < n; ++h) {
      VScalar u = uniform_from_bits<VScalar>({y[h]});
      out[written++] = u.v;
      ++idx;
    }
  }
}

void fill_normal_scalar(uint64_t seed, uint64_t stream, uint64_t start, std::size_t n,
                        double* out) {
  if (n == 0) return;
  uint64_t idx = start;
  std::size_t written = 0;
  while (written < n) {
    uint64_t y[2];
    block_u64(seed, stream, idx >> 1, y);
    VScalar u1 = uniform_from_bits<VScalar>({y[0]});
    VScalar u2 = uniform_from_bits<VScalar>({y[1]});
    VScalar z0, z1;
    box_muller(u1, u2, z0, z1);
    double z[2] = {z0.v, z1.v};
    for (int h = static_cast<int>(idx & 1); h < 2 && written < n; ++h) {
      out[written++] = z[h];
      ++idx;
    }
  }
}

double sum_scalar(const double* x, std::size_t n) {
  double a0 = 0, a1 = 0, a2 = 0, a3 = 0;
  std::size_t main = n & ~std::size_t{3};
  for (std::size_t i = 0; i < main; i += 4) {
    a0 += x[i];
    a1 += x[i + 1];
    a2 += x[i + 2];
    a3 += x[i + 3];
  }
  double total = (a0 + a1) + (a2 + a3);
  for (std::size_t i = main; i < n; ++i) total += x[i];
  return total;
}

double sumsq_scalar(const double* x, std::size_t n) {
  double a0 = 0, a1 = 0, a2 = 0, a3 = 0;
  std::size_t main = n & ~std::size_t{3};
  for (std::size_t i = 0; i < main; i += 4) {
    a0 += x[i] * x[i];
    a1 += x[i + 1] * x[i + 1];
    a2 += x[i + 2] * x[i + 2];
    a3 += x[i + 3] * x[i + 3];
  }
  double total = (a0 + a1) + (a2 + a3);
  for (std::size_t i = main; i < n; ++i) total += x[i] * x[i];
  return total;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double a0 = 0, a1 = 0, a2 = 0, a3 = 0;
  std::size_t main = n & ~std::size_t{3};
  for (std::size_t i = 0; i < main; i += 4) {
    a0 += x[i] * y[i];
    a1 += x[i + 1] * y[i + 1];
    a2 += x[i + 2] * y[i + 2];
    a3 += x[i + 3] * y[i + 3];
  }
  double total = (a0 + a1) + (a2 + a3);
  for (std::size_t i = main; i < n; ++i) total += x[i] * y[i];
  return total;
}

double max_abs_scalar(const double* x, std::size_t n) {
  double a0 = 0, a1 = 0, a2 = 0, a3 = 0;
  std::size_t main = n & ~std::size_t{3};
  for (std::size_t i = 0; i < main; i += 4) {
    a0 = std::max(a0, std::fabs(x[i]));
    a1 = std::max(a1, std::fabs(x[i + 1]));
    a2 = std::max(a2, std::fabs(x[i + 2]));
    a3 = std::max(a3, std::fabs(x[i + 3]));
  }
  double total = std::max(std::max(a0, a1), std::max(a2, a3));
  for (std::size_t i = main; i < n; ++i) total = std::max(total, std::fabs(x[i]));
  return total;
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k = {fill_u64_scalar, fill_uniform_scalar, fill_normal_scalar,
                            sum_scalar,      sumsq_scalar,        dot_scalar,
                            max_abs_scalar};
  return k;
}

void philox4x32_block(uint64_t seed, uint64_t stream, uint64_t block, uint32_t out[4]) {
  philox_block(seed, stream, block, out);
}

uint64_t mix_seed(uint64_t master, uint64_t salt) {
  uint64_t z = master + (salt + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace levylab::kernels
