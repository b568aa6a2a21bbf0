#pragma once
// shared helpers for the test suites

#include <cmath>
#include <vector>

#include "levylab/levy/sampler.hpp"

namespace levylab::testutil {

// Hand-built driver: deterministic jump train on a uniform grid, no Gaussian
// or small-jump parts. Jump times must be strictly inside (0, horizon).
inline SampledLevyPath manual_jump_driver(int dim, double horizon, int n_steps,
                                          const std::vector<PathJump>& jumps) {
  std::vector<double> uniform(n_steps + 1);
  for (int i = 0; i <= n_steps; ++i) uniform[i] = horizon * i / n_steps;
  std::vector<double> jt;
  for (const auto& j : jumps) jt.push_back(j.time);
  std::sort(jt.begin(), jt.end());
  std::vector<double> grid = merge_times(uniform, jt);

  const std::size_t nodes = grid.size();
  std::vector<double> zeros(nodes * dim, 0.0);
  std::vector<double> large(nodes * dim, 0.0);
  for (std::size_t i = 0; i < nodes; ++i) {
    for (const auto& j : jumps) {
      if (j.time <= grid[i] + 1e-12) {
        for (int c = 0; c < dim; ++c) large[i * dim + c] += j.delta[c];
      }
    }
  }
  SampledLevyPath out;
  out.small = CadlagPath(dim, grid, zeros, {});
  out.gauss = CadlagPath(dim, grid, zeros, {});
  out.large = CadlagPath(dim, grid, large, jumps);
  out.total = CadlagPath(dim, grid, std::move(large), jumps);
  out.horizon = horizon;
  out.seed = 0;
  return out;
}

// Keep every m-th uniform node plus all jump nodes; component values are
// carried over unchanged, so the coarse path is the restriction of the fine
// one.
inline SampledLevyPath coarsen_driver(const SampledLevyPath& fine, int n_steps_fine, int m) {
  const double horizon = fine.horizon;
  std::vector<double> keep;
  for (int i = 0; i <= n_steps_fine; i += m) keep.push_back(horizon * i / n_steps_fine);
  for (const auto& j : fine.total.jumps()) keep.push_back(j.time);
  std::sort(keep.begin(), keep.end());
  keep = merge_times(keep, {});

  auto restrict_path = [&](const CadlagPath& p) {
    const int d = p.dim();
    std::vector<double> values;
    values.reserve(keep.size() * d);
    for (double t : keep) {
      std::span<const double> v = p.value(p.index_of(t));
      values.insert(values.end(), v.begin(), v.end());
    }
    return CadlagPath(d, keep, std::move(values), p.jumps());
  };
  SampledLevyPath out;
  out.total = restrict_path(fine.total);
  out.small = restrict_path(fine.small);
  out.gauss = restrict_path(fine.gauss);
  out.large = restrict_path(fine.large);
  out.horizon = horizon;
  out.seed = fine.seed;
  return out;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::fabs(a[i] - b[i]));
  return worst;
}

}  // namespace levylab::testutil
