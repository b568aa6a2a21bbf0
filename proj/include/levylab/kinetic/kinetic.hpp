#pragma once
// The kinetic Langevin system dX = V dt, dV = F(X,V) dt + dW embedded as a
// degenerate SDE in R^{2d} with nilpotent block matrix A, and its explicit
// integral form.

#include "levylab/kinetic/force.hpp"
#include "levylab/sde/solver.hpp"

namespace levylab {

// n = 2d, A = [[0, I], [0, 0]], C = (0; I), b(x,v) = (0; F(x,v)),
// sigma == C, Brownian triplet Q = I_d
SdeProblem make_kinetic_problem(const KineticForce& force, double horizon);
GeneratingTriplet kinetic_triplet(int d);

struct KineticSolution {
  std::vector<double> times;
  std::vector<double> x;  // row-major (node, component)
  std::vector<double> v;
  int d = 0;

  CadlagPath combined() const;  // stacked (x; v) path
};

// Explicit system:
//   x(t) = x0 + t v0 + int_0^t (t-s) F(x,v) ds + int_0^t W_s ds
//   v(t) = v0 + int_0^t F(x,v) ds + W_t
// The (t-s) kernel is accumulated as t*P - Q with P = int F, Q = int s F, so
// the cost is O(N). F-integrals use a trapezoid predictor-corrector (exact
// for constant F), int W ds uses the trapezoid rule.
KineticSolution explicit_kinetic_solve(const KineticForce& force, const CadlagPath& w,
                                       const Vector& x0, const Vector& v0, double dt);

}  // namespace levylab
