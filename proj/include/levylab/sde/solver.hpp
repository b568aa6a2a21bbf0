#pragma once
// Strong solutions of dZ = [b(t,Z) + AZ] dt + dM on a fixed noise path, and
// the per-path deterministic integral equation
//   g(t) = x + int_s^t btilde(v, g(v) + M_v) dv
// whose uniqueness is the object under test. Euler uses left-point steps;
// Picard iterates the integral map with trapezoid quadrature and damping, so
// the two discretizations are genuinely different constructions.

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "levylab/integral/integral.hpp"
#include "levylab/sde/holder_field.hpp"

namespace levylab {

struct SdeProblem {
  int n = 0, d = 0;
  Matrix a;
  MatrixIntegrand sigma;
  HolderField drift;
  double horizon = 0;

  void validate() const;
};

enum class Scheme { euler, picard };

struct PicardOptions {
  double damping = 0.5;
  double tol = 1e-10;
  int max_iters = 10000;
  Vector initial;  // empty: start from g == x
};

struct SolveOptions {
  Scheme scheme = Scheme::euler;
  double dt = 1e-3;  // must be commensurate with the driver grid
  PicardOptions picard;
};

struct SolveInfo {
  std::string method;
  double dt = 0;
  int iterations = 0;       // Picard iterations (0 for Euler)
  double residual = 0;      // final Picard sup-residual
  bool converged = true;    // false when Picard hit max_iters while improving
};

struct SolutionPath {
  double s = 0;
  Vector x0;
  CadlagPath path;  // on [0,T]: equals x0 for t <= s, jumps inherited from M
  SolveInfo info;
};

struct PicardError : std::runtime_error {
  std::vector<double> residual_history;
  PicardError(const std::string& what, std::vector<double> hist)
      : std::runtime_error(what), residual_history(std::move(hist)) {}
};

SolutionPath solve_strong(const SdeProblem& problem, const SampledLevyPath& driver, double s,
                          const Vector& x, const SolveOptions& opts);

// Variant sharing a precomputed forcing path M (total of stochastic_integral)
SolutionPath solve_strong_on(const SdeProblem& problem, const CadlagPath& m, double s,
                             const Vector& x, const SolveOptions& opts);

using TildeDrift =
    std::function<void(double r, std::span<const double> y, std::span<double> out)>;

// The integral-equation solver: g is continuous, M enters only through the
// drift argument. Returned path has no jump records.
SolutionPath solve_integral_equation(const TildeDrift& tilde_drift, int n, const CadlagPath& m,
                                     double s0, const Vector& x, const SolveOptions& opts);

// btilde(v,y) = b(v,y) + A y, the drift of the integral form
TildeDrift drift_plus_linear(const SdeProblem& problem);

// time-shift construction (autonomous drift, constant sigma): solve from 0
// against the shifted driver and re-index
SolutionPath shift_solution(const SdeProblem& problem, const SampledLevyPath& driver, double s,
                            const Vector& x, const SolveOptions& opts);

// sup-norm distance over grid times present in both paths (tolerance 1e-9)
double sup_distance_on_common(const CadlagPath& a, const CadlagPath& b, double from_time = 0.0);

// Richardson-style scheme error: sup distance between the dt and dt/4 Euler
// runs on the same driver
double estimate_scheme_error(const SdeProblem& problem, const SampledLevyPath& driver, double s,
                             const Vector& x, double dt);

}  // namespace levylab
