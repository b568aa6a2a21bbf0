#pragma once
// Monte Carlo checks of the moment and tail estimates satisfied by the
// decomposed additive integral: second moments of I and J and the theta
// moment of K scale linearly in |t-s|, and increments obey a Chebyshev-type
// tail envelope.

#include <cstdint>
#include <vector>

#include "levylab/integral/integral.hpp"

namespace levylab {

struct TimePair {
  double s, t;
  double gap() const { return t - s; }
};

// dyadic ladder (base, base + 2^-k) for k = k_lo..k_hi
std::vector<TimePair> dyadic_pairs(int k_lo = 2, int k_hi = 10, double base = 0.0);

struct MomentRow {
  double s, t, gap;
  double mom_small, mom_gauss, mom_large;   // E|I_t-I_s|^2, E|J_t-J_s|^2, E|K_t-K_s|^theta
  double ratio_small, ratio_gauss, ratio_large;  // moment / gap
  double se_gauss_ratio;                    // SE of the J ratio estimate
};

struct MomentReport {
  std::vector<MomentRow> rows;
  double theta;
  double max_ratio_small = 0, max_ratio_gauss = 0, max_ratio_large = 0;
  // Spearman correlation of each ratio against 1/gap (growth trend)
  double trend_small = 0, trend_gauss = 0, trend_large = 0;
  double trend_threshold;
  bool pass = false;
};

struct MomentCheckConfig {
  int n_paths = 10000;
  int n_steps = 1024;
  double horizon = 1.0;
  double theta = 0.5;
  double trend_threshold = 0.5;
  int threads = 1;
  SamplerOptions sampler;
};

// Refuses (throws std::invalid_argument) when the theta moment is infinite.
MomentReport moment_estimates_check(const GeneratingTriplet& triplet, const MatrixIntegrand& sigma,
                                    const std::vector<TimePair>& pairs, std::uint64_t master_seed,
                                    const MomentCheckConfig& cfg);

struct TailRow {
  double r, s, gap;
  double threshold;  // gap^{1/8}
  double p_hat;      // empirical exceedance probability
  double envelope;   // c3 (gap^{3/4} + gap^{1-theta/8})
};

struct TailReport {
  std::vector<TailRow> rows;
  double c3 = 0;
  double theta;
  bool pass = false;  // all finer-gap rows below the fitted envelope
};

struct TailCheckConfig {
  int n_paths = 10000;
  int n_steps = 1024;
  double horizon = 1.0;
  double theta = 0.5;
  int threads = 1;
  SamplerOptions sampler;
};

// Uses the modified integral r -> e^{-rA} sigma(r); fits c3 on the coarsest
// pair and checks the finer pairs against the envelope.
TailReport tail_bound_check(const GeneratingTriplet& triplet, const Matrix& a,
                            const MatrixIntegrand& sigma, const std::vector<TimePair>& pairs,
                            std::uint64_t master_seed, const TailCheckConfig& cfg);

}  // namespace levylab
