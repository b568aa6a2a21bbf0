#pragma once
// Path sampling via the Levy-Ito decomposition: compensated small jumps +
// Gaussian part + large-jump compound Poisson part. The three components are
// retained so stochastic integrals can be built against each separately.

#include <cstdint>

#include "levylab/kernels/kernels.hpp"
#include "levylab/levy/path.hpp"
#include "levylab/levy/triplet.hpp"

namespace levylab {

enum class SmallJumpStrategy {
  truncate,            // drop jumps below epsilon, keep exact compensator on (eps,1]
  gaussian_surrogate,  // additionally replace the dropped part by a Brownian
                       // motion with matched variance
};

struct SamplerOptions {
  SmallJumpStrategy strategy = SmallJumpStrategy::truncate;
  double epsilon = 1e-3;  // truncation level for infinite-activity components
};

struct SampledLevyPath {
  CadlagPath total;  // L = small + gauss + large at every node
  CadlagPath small;  // compensated small jumps (plus surrogate if enabled)
  CadlagPath gauss;  // Q-Wiener part
  CadlagPath large;  // jumps with |x| > 1, piecewise constant
  double horizon = 0;
  std::uint64_t seed = 0;

  int dim() const { return total.dim(); }
};

// Deterministic in all arguments. Jump counts/times/sizes are drawn from
// dedicated streams so they do not depend on n_steps; the grid is the uniform
// n_steps grid refined by the jump times.
SampledLevyPath sample_levy_path(const GeneratingTriplet& triplet, double horizon, int n_steps,
                                 std::uint64_t seed, const SamplerOptions& opts = {});

// per-path seeds for ensembles
std::uint64_t derive_path_seed(std::uint64_t master, std::uint64_t path_index);

// Poisson count by inversion from a counter stream (chunked for large mean)
int poisson_count(kernels::CounterRng& rng, double mean);

// shifted driver L^(s): grid/components restarted at s, values L_{s+t}-L_s
SampledLevyPath shift_driver(const SampledLevyPath& path, double s);

}  // namespace levylab
