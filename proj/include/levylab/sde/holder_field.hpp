#pragma once
// Bounded Holder drift fields with certified sup-norm and Holder constants.
// Certificates are computed from closed-form moduli of the built-in families
// and validated by sampled quotients in the tests.

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "levylab/linalg.hpp"

namespace levylab {

class HolderField {
 public:
  using EvalFn = std::function<void(double t, std::span<const double> x, std::span<double> out)>;

  HolderField() = default;

  static HolderField zero(int n);
  static HolderField constant(Vector c);
  // b_i(x) = amp * sin(freq * x_i), Lipschitz with constant amp*freq
  static HolderField sinusoid(int n, double amp, double freq);
  static HolderField custom(int n, EvalFn eval, double bound, double beta, double holder_const,
                            bool time_dependent, std::string family);

  int n() const { return n_; }
  void eval(double t, std::span<const double> x, std::span<double> out) const {
    eval_(t, x, out);
  }
  Vector eval_vec(double t, const Vector& x) const;

  double bound() const { return bound_; }
  double beta() const { return beta_; }
  double holder_const() const { return holder_const_; }
  bool time_dependent() const { return time_dependent_; }
  const std::string& family() const { return family_; }

 private:
  int n_ = 0;
  EvalFn eval_;
  double bound_ = 0, beta_ = 1, holder_const_ = 0;
  bool time_dependent_ = false;
  std::string family_;
};

// Largest sampled quotient |b(t,x)-b(t,y)| / |x-y|^beta over random pairs,
// and the largest sampled |b|; used to validate certificates.
struct SampledModulus {
  double max_quotient;
  double max_value;
};
SampledModulus sample_field_modulus(const HolderField& field, double horizon, int t_slices,
                                    int n_pairs, double box_radius, std::uint64_t seed);

// Unbounded locally-Holder field with per-ball certificates.
struct LocallyHolderField {
  int n = 0;
  HolderField::EvalFn eval;
  double beta = 1.0;
  std::function<double(double)> bound_on_ball;         // radius -> sup |b|
  std::function<double(double)> holder_const_on_ball;  // radius -> [b]_beta
  bool time_dependent = false;
  std::string family;
};

// eta_R * b with a C^2 radial cutoff: identically 1 on |x| <= R, 0 on
// |x| >= R + margin. Certificates recomputed from the product rule.
HolderField localize_drift(const LocallyHolderField& field, double radius, double margin);

}  // namespace levylab
