#pragma once
// Runtime-dispatched compute kernels. Every entry has a scalar reference
// implementation and (on x86-64 with AVX2) a SIMD implementation; the two
// are bit-identical by construction and the equivalence is asserted by the
// test suite, so lane selection never changes numerical results.
//
// Random streams are counter-based (Philox4x32-10): a draw is a pure
// function of (seed, stream, index), which lets ensembles run data-parallel
// without any shared generator state.

#include <cstddef>
#include <cstdint>

namespace levylab::kernels {

enum class Lane { scalar, avx2 };

struct Kernels {
  // raw 64-bit words of the (seed, stream) counter stream, indices [start, start+n)
  void (*fill_u64)(uint64_t seed, uint64_t stream, uint64_t start, std::size_t n, uint64_t* out);
  // uniforms in (0,1), same indexing
  void (*fill_uniform)(uint64_t seed, uint64_t stream, uint64_t start, std::size_t n, double* out);
  // standard normals, same indexing (Box-Muller pairs per counter block)
  void (*fill_normal)(uint64_t seed, uint64_t stream, uint64_t start, std::size_t n, double* out);

  // Blocked reductions. Semantics (both lanes, bit-exact): four interleaved
  // partial accumulators over the first 4*floor(n/4) elements, combined as
  // (a0+a1)+(a2+a3), then the tail folded in sequentially.
  double (*sum)(const double* x, std::size_t n);
  double (*sumsq)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*max_abs)(const double* x, std::size_t n);
};

const Kernels& scalar_kernels();
// null when the binary lacks AVX2 codegen or the CPU lacks AVX2
const Kernels* avx2_kernels();

// Raw Philox4x32-10 block, counter = (block lo, block hi, stream lo, stream
// hi), key = (seed lo, seed hi). Word index i of the streams above reads
// half i%2 of block i/2. Exposed for known-answer tests.
void philox4x32_block(uint64_t seed, uint64_t stream, uint64_t block, uint32_t out[4]);

// Active kernel table. Selected once (env LEVYLAB_KERNELS=scalar|avx2|auto),
// overridable programmatically before first heavy use.
const Kernels& active();
Lane active_lane();
void force_lane(Lane lane);
bool avx2_available();

// Sequential convenience wrapper over the counter stream; next_*() values
// coincide with fill_*() at the same indices.
class CounterRng {
 public:
  CounterRng(uint64_t seed, uint64_t stream) : seed_(seed), stream_(stream) {}

  double next_uniform() {
    double u;
    active().fill_uniform(seed_, stream_, idx_++, 1, &u);
    return u;
  }
  double next_normal() {
    double z;
    active().fill_normal(seed_, stream_, idx_++, 1, &z);
    return z;
  }
  uint64_t next_u64() {
    uint64_t w;
    active().fill_u64(seed_, stream_, idx_++, 1, &w);
    return w;
  }
  uint64_t index() const { return idx_; }

 private:
  uint64_t seed_, stream_;
  uint64_t idx_ = 0;
};

// SplitMix64; used to derive per-path seeds from a master seed.
uint64_t mix_seed(uint64_t master, uint64_t salt);

}  // namespace levylab::kernels
