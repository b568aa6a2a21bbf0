#pragma once
// Law of the driving Levy process: generating triplet (Q, 0, nu) with nu
// drawn from parametric families that admit closed-form moment certificates.

#include <complex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "levylab/linalg.hpp"

namespace levylab {

struct QuadratureError : std::runtime_error {
  double residual;
  QuadratureError(const std::string& what, double resid)
      : std::runtime_error(what), residual(resid) {}
};

// ---- jump size distributions for compound Poisson components ----

struct PointMassJump {
  Vector value;  // any dimension
};
struct GaussianJump {
  double mean, sd;  // d = 1
};
struct UniformJump {
  double lo, hi;  // d = 1
};
struct ParetoJump {
  double index;  // density index*x^{-index-1} on (1,inf), d = 1
};

using JumpDist = std::variant<PointMassJump, GaussianJump, UniformJump, ParetoJump>;

// characteristic function E e^{i<k,Y>}; Pareto is evaluated by quadrature
// with an analytic oscillatory tail (throws QuadratureError on failure)
std::complex<double> jump_char_fn(const JumpDist& d, const Vector& k);
// E[Y 1_{|Y|<=1}], closed form per family
Vector jump_mean_small(const JumpDist& d, int dim);
// integral |y|^theta over |y|>1 against the jump law; finite flag analytic
struct ThetaMoment {
  bool finite;
  double value;
};
ThetaMoment jump_abs_moment_large(const JumpDist& d, double theta);
// E[min(1, |Y|^2)], closed form or quadrature; used for the nu-integrability
// certificate
double jump_min1_sq(const JumpDist& d);

// ---- Levy measure ----

struct CompoundPoissonComp {
  double intensity;  // lambda > 0
  JumpDist jumps;
};

// symmetric nu(dx) = scale*|x|^{-1-alpha} dx on 0 < |x| <= 1, d = 1
struct SmallJumpStableComp {
  double alpha;  // in (0,2)
  double scale;  // > 0
};

using LevyComponent = std::variant<CompoundPoissonComp, SmallJumpStableComp>;

struct LevyMeasure {
  std::vector<LevyComponent> components;  // empty = no jumps
  bool empty() const { return components.empty(); }
};

class GeneratingTriplet {
 public:
  // drift is fixed to zero. Throws std::invalid_argument on an asymmetric or
  // indefinite Q (eigenvalue tolerance 1e-12) or an unsupported family/dim
  // combination.
  GeneratingTriplet(int dim, Matrix q, LevyMeasure measure);

  static GeneratingTriplet brownian(int dim) {
    return GeneratingTriplet(dim, Matrix::Identity(dim, dim), {});
  }
  static GeneratingTriplet deterministic_zero(int dim) {
    return GeneratingTriplet(dim, Matrix::Zero(dim, dim), {});
  }

  int dim() const { return dim_; }
  const Matrix& q() const { return q_; }
  const LevyMeasure& measure() const { return measure_; }
  // S with S S^T = Q (eigendecomposition; valid for singular Q)
  const Matrix& gauss_factor() const { return gauss_factor_; }

  // closed-form value of the integral min(1,|v|^2) nu(dv)
  double nu_integrability_certificate() const;
  bool theta_moment_finite(double theta) const;

 private:
  int dim_;
  Matrix q_;
  LevyMeasure measure_;
  Matrix gauss_factor_;
};

// ---- spec-level operations on triplets ----

// Levy-Khintchine exponent phi(k), a = 0:
//   phi(k) = <Qk,k>/2 - integral (e^{i<k,y>} - 1 - i<k,y> 1_{|y|<=1}) nu(dy)
std::complex<double> levy_exponent(const GeneratingTriplet& triplet, const Vector& k);

// large-jump moment integral |x|^theta over |x|>1, theta in (0,1)
ThetaMoment theta_moment(const GeneratingTriplet& triplet, double theta);

}  // namespace levylab
