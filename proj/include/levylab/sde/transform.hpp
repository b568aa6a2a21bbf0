#pragma once
// The Z <-> U reduction: U(t) = e^{-tA} Z(t) solves the modified SDE with
// A = 0, drift btilde(r,x) = e^{-rA} b(r, e^{rA} x) and integrand
// e^{-rA} sigma(r).

#include <memory>

#include "levylab/sde/solver.hpp"

namespace levylab {

struct ModifiedProblem {
  SdeProblem modified;  // A = 0
  std::shared_ptr<MatrixExp> expa;

  CadlagPath to_u(const CadlagPath& z) const;  // multiply values by e^{-tA}
  CadlagPath to_z(const CadlagPath& u) const;  // multiply values by e^{tA}
};

ModifiedProblem transform_to_modified(const SdeProblem& problem);

}  // namespace levylab
