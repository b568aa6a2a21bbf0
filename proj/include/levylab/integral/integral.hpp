#pragma once
// Additive forcing processes: M_t = int_0^t sigma(s) dL_s built against the
// retained Levy-Ito components of the driver, decomposed as I + J + K
// (compensated small jumps, Gaussian part, large jumps).

#include "levylab/integral/integrand.hpp"
#include "levylab/levy/sampler.hpp"

namespace levylab {

struct IntegralDecomposition {
  CadlagPath small;  // I: against the compensated small-jump component
  CadlagPath gauss;  // J: against the Gaussian component
  CadlagPath large;  // K: exact jump sum over |dL| > 1
  CadlagPath total;  // I + J + K at every node

  // checks total = I+J+K, jump records, and component jump sizing
  void validate() const;
};

// Left-point sums against the Gaussian/continuous parts, exact handling of
// jumps: a jump at node u contributes sigma(u) dL_u to the value at u.
IntegralDecomposition stochastic_integral(const MatrixIntegrand& sigma,
                                          const SampledLevyPath& driver);

// same with integrand r -> e^{-rA} sigma(r)
IntegralDecomposition modified_integral(const Matrix& a, const MatrixIntegrand& sigma,
                                        const SampledLevyPath& driver);

}  // namespace levylab
