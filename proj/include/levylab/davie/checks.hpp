#pragma once
// Numerical verification of the flow/uniqueness statements on a fixed noise
// path: agreement of independent discrete constructions of the integral
// equation, the flow composition law, the Holder-in-x modulus, cadlag
// dependence on the start time, and the L^p-Lipschitz Monte Carlo estimate.

#include <cstdint>
#include <string>
#include <vector>

#include "levylab/sde/solver.hpp"

namespace levylab {

struct CheckReport {
  std::string name;
  std::vector<double> residuals;
  double tolerance = 0;
  double max_residual = 0;
  bool pass = false;
  std::string notes;

  void finish() {
    max_residual = 0;
    for (double r : residuals) max_residual = std::max(max_residual, r);
    pass = max_residual <= tolerance;
  }
};

// Flow evaluations psi(s,t,x) on grids for one fixed driver; psi(s,t,x) = x
// for t <= s.
struct FlowSample {
  std::vector<double> s_grid, t_grid;
  std::vector<Vector> x_grid;
  int n = 0;
  std::vector<double> data;  // [(is*nx + ix)*nt + it]*n + c

  std::span<const double> psi(std::size_t is, std::size_t it, std::size_t ix) const {
    return {data.data() + ((is * x_grid.size() + ix) * t_grid.size() + it) * n,
            static_cast<std::size_t>(n)};
  }
};

FlowSample build_flow_sample(const SdeProblem& problem, const SampledLevyPath& driver,
                             std::vector<double> s_grid, std::vector<double> t_grid,
                             std::vector<Vector> x_grid, double dt);

struct UniquenessConfig {
  double dt = 1e-3;
  double delta = 1.0;  // perturbation size of the second Picard start
  PicardOptions picard;
};

// Four constructions of the same integral equation (Euler at dt and dt/2,
// damped Picard from x and from x + delta); pass when all pairwise
// sup-distances stay within 10x the max of the Richardson scheme error and
// the Picard stopping residuals.
CheckReport davie_uniqueness_check(const SdeProblem& problem, const SampledLevyPath& driver,
                                   double s0, const Vector& x, const UniquenessConfig& cfg);

struct FlowCheckConfig {
  std::vector<double> s_grid, r_grid, t_grid;
  std::vector<Vector> x_grid;
  double dt = 1e-3;
};

CheckReport flow_property_check(const SdeProblem& problem, const SampledLevyPath& driver,
                                const FlowCheckConfig& cfg);

struct HolderModulusConfig {
  double s = 0.0;
  int m = 0;             // integer > 2n; 0 means use 4n+1
  int k_lo = 1, k_hi = 6;  // pair separations 2^-k
  int pairs_per_scale = 16;
  double box_radius = 1.0;
  double dt = 1e-3;
  double trend_threshold = 0.5;
  std::uint64_t seed = 1;
};

// normalized modulus r(x,y) = sup_t |psi(s,t,x)-psi(s,t,y)| /
// (|x-y|^{(m-2n)/m} max((|x| v |y|)^{(2n+1)/m}, 1)); pass when the per-scale
// 99th percentile shows no growth trend as |x-y| -> 0
CheckReport holder_flow_modulus_check(const SdeProblem& problem, const SampledLevyPath& driver,
                                      const HolderModulusConfig& cfg);

struct LpCell {
  double s;
  Vector x, y;
  double ratio;  // E[sup_{s<=t<=T} |Z^{s,x}-Z^{s,y}|^p] / |x-y|^p
  double se;
};

struct LpEstimate {
  double p;
  std::vector<LpCell> table;
  double max_ratio = 0, max_se = 0;
  bool stable = false;  // all cells within 3 SE of the max
};

struct LpConfig {
  double p = 2.0;
  int n_paths = 200;
  int n_steps = 1024;
  double dt = 1e-3;
  int threads = 1;
  std::uint64_t master_seed = 1;
  SamplerOptions sampler;
};

// refuses p < 2
LpEstimate lp_lipschitz_estimate(const SdeProblem& problem, const GeneratingTriplet& triplet,
                                 const std::vector<double>& s_grid,
                                 const std::vector<std::pair<Vector, Vector>>& pairs,
                                 const LpConfig& cfg);

struct CadlagProbeConfig {
  double s_star = 0.5;
  int m_lo = 2, m_hi = 7;  // ladder offsets 2^-m
  std::vector<Vector> x_grid;
  double dt = 1e-3;
};

struct CadlagProbeReport {
  std::vector<double> right_gaps;   // sup-gap for r_m = s* + 2^-m, m ascending
  std::vector<double> left_diffs;   // successive sup-gaps along s_m = s* - 2^-m
  double left_limit_gap = 0;        // distance between the left-ladder end and psi(s*)
  double tol_floor = 0;
  bool right_converges = false;
  bool left_converges = false;
  bool pass = false;
};

CadlagProbeReport cadlag_in_s_probe(const SdeProblem& problem, const SampledLevyPath& driver,
                                    const CadlagProbeConfig& cfg);

}  // namespace levylab
