#pragma once
// Holder force fields F(x,v) for the kinetic system, built from clipped
// powers of linear projections so the Holder constants have closed forms:
//   F_i(x,v) = c_i  clip(sgn(u_i.x - k_i)|u_i.x - k_i|^gamma,  +-B)
//            + c'_i clip(sgn(w_i.v - k'_i)|w_i.v - k'_i|^beta', +-B)

#include <cstdint>
#include <string>
#include <vector>

#include "levylab/linalg.hpp"

namespace levylab {

struct RidgeTerm {
  double c_x = 0, c_v = 0;
  Vector u, w;  // projection directions in R^d
  double k_x = 0, k_v = 0;
};

struct KineticForceSpec {
  int d = 1;
  double gamma = 0.75;       // x-Holder exponent, theorem regime (2/3, 1)
  double beta_prime = 0.75;  // v-Holder exponent in (0, 1)
  double clip = 1.0;         // B
  std::vector<RidgeTerm> terms;  // one per output component (size d)

  // deterministic random spec: directions and offsets from a counter stream
  static KineticForceSpec random(int d, double gamma, double beta_prime, double amplitude,
                                 double clip, std::uint64_t seed);
};

class KineticForce {
 public:
  explicit KineticForce(KineticForceSpec spec);

  int d() const { return spec_.d; }
  double gamma() const { return spec_.gamma; }
  double beta_prime() const { return spec_.beta_prime; }
  bool theorem_regime() const { return spec_.gamma > 2.0 / 3.0 && spec_.gamma < 1.0; }

  // certified constants of condition (H):
  // |F(x,v)-F(x',v')| <= holder_const() (|x-x'|^gamma + |v-v'|^beta')
  double bound() const { return bound_; }
  double holder_const() const { return holder_const_; }

  void eval(std::span<const double> x, std::span<const double> v, std::span<double> out) const;
  Vector eval_vec(const Vector& x, const Vector& v) const;

  const KineticForceSpec& spec() const { return spec_; }

 private:
  KineticForceSpec spec_;
  double bound_ = 0, holder_const_ = 0;
};

// construction entry point; throws on exponents outside (0,1)
KineticForce holder_force_field(const KineticForceSpec& spec);

// sampled sup of |F(x,v)-F(x',v')| / (|x-x'|^gamma + |v-v'|^beta') and of |F|
struct ForceModulus {
  double max_quotient;
  double max_value;
};
ForceModulus sample_force_modulus(const KineticForce& f, int n_pairs, double box_radius,
                                  std::uint64_t seed);

}  // namespace levylab
