#pragma once
// Pathwise integration-by-parts identity for the additive integral:
//   int_s^t e^{(t-r)A} A M_r dr
//     = int_s^t e^{(t-r)A} sigma(r) dL_r + e^{(t-s)A} M_s - M_t.
// The dr side integrates the exponential kernel exactly per cell and treats
// M by its endpoint average (left limits at jumps), so the residual is
// machine-zero for drivers whose M is piecewise constant.

#include "levylab/integral/integral.hpp"

namespace levylab {

// sup-norm of the identity residual for fixed (s,t) on the driver grid
double integration_by_parts_residual(const Matrix& a, const MatrixIntegrand& sigma,
                                     const SampledLevyPath& driver, double s, double t);

}  // namespace levylab
