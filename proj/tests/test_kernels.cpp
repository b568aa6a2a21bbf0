// Kernel layer: Philox known-answer vectors (frozen from an independent
// reference implementation), scalar/AVX2 bit-equivalence, and accuracy of
// the shared transcendental helpers.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "doctest.h"
#include "levylab/kernels/kernels.hpp"
#include "levylab/kernels/vec.hpp"

using namespace levylab::kernels;

TEST_CASE("philox4x32-10 known-answer vectors") {
  struct Kat {
    uint64_t seed, stream, block;
    uint32_t w[4];
  };
  // counter = (block lo, block hi, stream lo, stream hi), key = (seed lo, seed hi)
  const Kat kats[] = {
      {0, 0, 0, {0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}},
      {0xffffffffffffffffULL,
       0xffffffffffffffffULL,
       0xffffffffffffffffULL,
       {0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}},
      {0x299f31d0a4093822ULL,
       0x0370734413198a2eULL,
       0x85a308d3243f6a88ULL,
       {0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}},
      {0xcafef00ddeadbeefULL, 0, 1, {0x149714fau, 0x7a2992c0u, 0x1014078eu, 0x3b34dde9u}},
      {0x89abcdef01234567ULL,
       0x876543210fedcba9ULL,
       0x9abcdef012345678ULL,
       {0xa9aa3f72u, 0x945d7c5au, 0x66965c93u, 0x2edc4b5fu}},
  };
  for (const Kat& kat : kats) {
    uint32_t w[4];
    philox4x32_block(kat.seed, kat.stream, kat.block, w);
    CHECK(w[0] == kat.w[0]);
    CHECK(w[1] == kat.w[1]);
    CHECK(w[2] == kat.w[2]);
    CHECK(w[3] == kat.w[3]);
  }
  // the u64 stream packs block words as (w1<<32)|w0, (w3<<32)|w2
  uint64_t y[2];
  scalar_kernels().fill_u64(0, 0, 0, 2, y);
  CHECK(static_cast<uint32_t>(y[0]) == 0x6627e8d5u);
  CHECK(static_cast<uint32_t>(y[0] >> 32) == 0xe169c58du);
  CHECK(static_cast<uint32_t>(y[1]) == 0xbc57ac4cu);
  CHECK(static_cast<uint32_t>(y[1] >> 32) == 0x9b00dbd8u);
}

TEST_CASE("scalar and AVX2 lanes are bit-identical") {
  const Kernels* avx = avx2_kernels();
  if (avx == nullptr) {
    MESSAGE("AVX2 lane not available; skipping equivalence checks");
    return;
  }
  const Kernels& ref = scalar_kernels();
  std::mt19937_64 meta(1234);

  for (int rep = 0; rep < 20; ++rep) {
    uint64_t seed = meta();
    uint64_t stream = meta();
    uint64_t start = meta() % 1000;
    std::size_t n = 1 + meta() % 300;

    std::vector<uint64_t> wa(n), wb(n);
    ref.fill_u64(seed, stream, start, n, wa.data());
    avx->fill_u64(seed, stream, start, n, wb.data());
    CHECK(wa == wb);

    std::vector<double> ua(n), ub(n);
    ref.fill_uniform(seed, stream, start, n, ua.data());
    avx->fill_uniform(seed, stream, start, n, ub.data());
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::bit_cast<uint64_t>(ua[i]) == std::bit_cast<uint64_t>(ub[i]));
    }

    std::vector<double> za(n), zb(n);
    ref.fill_normal(seed, stream, start, n, za.data());
    avx->fill_normal(seed, stream, start, n, zb.data());
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::bit_cast<uint64_t>(za[i]) == std::bit_cast<uint64_t>(zb[i]));
    }

    // reductions on assorted lengths, including ragged tails
    std::vector<double> x(n), y(n);
    ref.fill_normal(seed, stream + 1, 0, n, x.data());
    ref.fill_normal(seed, stream + 2, 0, n, y.data());
    CHECK(ref.sum(x.data(), n) == avx->sum(x.data(), n));
    CHECK(ref.sumsq(x.data(), n) == avx->sumsq(x.data(), n));
    CHECK(ref.dot(x.data(), y.data(), n) == avx->dot(x.data(), y.data(), n));
    CHECK(ref.max_abs(x.data(), n) == avx->max_abs(x.data(), n));
  }
}

TEST_CASE("chunked generation matches one-shot generation") {
  const Kernels& k = active();
  uint64_t seed = 77, stream = 5;
  std::vector<double> oneshot(257);
  k.fill_normal(seed, stream, 0, oneshot.size(), oneshot.data());
  std::vector<double> chunked(257);
  std::size_t pos = 0;
  for (std::size_t len : {1u, 2u, 7u, 64u, 100u, 83u}) {
    k.fill_normal(seed, stream, pos, len, chunked.data() + pos);
    pos += len;
  }
  REQUIRE(pos == chunked.size());
  for (std::size_t i = 0; i < oneshot.size(); ++i) {
    CHECK(std::bit_cast<uint64_t>(oneshot[i]) == std::bit_cast<uint64_t>(chunked[i]));
  }
}

TEST_CASE("vlog and vsincos track libm") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> uu(1e-16, 1.0);
  for (int i = 0; i < 20000; ++i) {
    double u = uu(gen);
    VScalar r = levylab::kernels::vlog(VScalar{u});
    double ref = std::log(u);
    CHECK(std::fabs(r.v - ref) <= 1e-14 * std::fabs(ref) + 1e-18);
  }
  std::uniform_real_distribution<double> ua(0.0, 6.283185307179586);
  for (int i = 0; i < 20000; ++i) {
    double a = ua(gen);
    VScalar s, c;
    levylab::kernels::vsincos(VScalar{a}, s, c);
    CHECK(std::fabs(s.v - std::sin(a)) <= 2e-15);
    CHECK(std::fabs(c.v - std::cos(a)) <= 2e-15);
  }
}

TEST_CASE("normal stream has the right moments") {
  const Kernels& k = active();
  const std::size_t n = 1u << 20;
  std::vector<double> z(n);
  k.fill_normal(2024, 0, 0, n, z.data());
  double mean = k.sum(z.data(), n) / double(n);
  double var = k.sumsq(z.data(), n) / double(n) - mean * mean;
  // SE of the mean is 1/sqrt(n), of the variance about sqrt(2/n)
  double se_mean = 1.0 / std::sqrt(double(n));
  double se_var = std::sqrt(2.0 / double(n));
  CHECK(std::fabs(mean) < 5 * se_mean);
  CHECK(std::fabs(var - 1.0) < 5 * se_var);

  // third and fourth moments
  double m3 = 0, m4 = 0;
  for (double v : z) {
    m3 += v * v * v;
    m4 += v * v * v * v;
  }
  m3 /= double(n);
  m4 /= double(n);
  CHECK(std::fabs(m3) < 5 * std::sqrt(15.0 / double(n)));
  CHECK(std::fabs(m4 - 3.0) < 5 * std::sqrt(96.0 / double(n)));
}

TEST_CASE("uniform stream is uniform and in (0,1)") {
  const Kernels& k = active();
  const std::size_t n = 1u << 18;
  std::vector<double> u(n);
  k.fill_uniform(7, 3, 0, n, u.data());
  double mn = 1, mx = 0, mean = 0;
  for (double v : u) {
    mn = std::min(mn, v);
    mx = std::max(mx, v);
    mean += v;
  }
  mean /= double(n);
  CHECK(mn > 0.0);
  CHECK(mx < 1.0);
  CHECK(std::fabs(mean - 0.5) < 5 * std::sqrt(1.0 / 12.0 / double(n)));
}

TEST_CASE("different streams are uncorrelated") {
  const Kernels& k = active();
  const std::size_t n = 1u << 16;
  std::vector<double> a(n), b(n);
  k.fill_normal(5, 10, 0, n, a.data());
  k.fill_normal(5, 11, 0, n, b.data());
  double corr = k.dot(a.data(), b.data(), n) / double(n);
  CHECK(std::fabs(corr) < 5.0 / std::sqrt(double(n)));
}
