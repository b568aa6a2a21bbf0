#include "levylab/matflow/ibp.hpp"

#include <cmath>
#include <stdexcept>

#include "levylab/matflow/matexp.hpp"

namespace levylab {

double integration_by_parts_residual(const Matrix& a, const MatrixIntegrand& sigma,
                                     const SampledLevyPath& driver, double s, double t) {
  if (!(s <= t)) throw std::invalid_argument("ibp: need s <= t");
  IntegralDecomposition m = stochastic_integral(sigma, driver);
  const CadlagPath& mt = m.total;
  const int n = sigma.rows();
  const std::size_t i0 = mt.index_of(s);
  const std::size_t i1 = mt.index_of(t);

  MatrixExp expa(a);
  // E_k = e^{(t - t_k) A} for nodes in [s, t]
  std::vector<Matrix> ek(i1 - i0 + 1);
  for (std::size_t i = i0; i <= i1; ++i) ek[i - i0] = expa.at(t - mt.time(i));

  // dr side: per cell, exact integral of e^{(t-r)A} A times the endpoint
  // average of M (left limit at the right endpoint)
  Vector lhs = Vector::Zero(n);
  for (std::size_t i = i0; i < i1; ++i) {
    std::span<const double> m_left = mt.value(i);
    std::vector<double> m_right = mt.left_limit(i + 1);
    Vector avg(n);
    for (int c = 0; c < n; ++c) avg[c] = 0.5 * (m_left[c] + m_right[c]);
    lhs += (ek[i - i0] - ek[i + 1 - i0]) * avg;
  }

  // dL side: left-node weights on the continuous parts, exact jump weights
  Vector rhs = Vector::Zero(n);
  auto add_continuous = [&](const CadlagPath& comp) {
    Vector d(n);
    for (std::size_t i = i0; i < i1; ++i) {
      std::span<const double> v0 = comp.value(i);
      std::vector<double> v1 = comp.left_limit(i + 1);
      for (int c = 0; c < n; ++c) d[c] = v1[c] - v0[c];
      rhs += ek[i - i0] * d;
    }
  };
  add_continuous(m.small);
  add_continuous(m.gauss);
  // K is piecewise constant: continuous contribution is zero
  for (const PathJump& j : mt.jumps()) {
    if (j.time > s + 1e-12 && j.time <= t + 1e-12) {
      std::size_t i = mt.index_of(j.time);
      rhs += ek[i - i0] * Eigen::Map<const Vector>(j.delta.data(), n);
    }
  }

  std::span<const double> ms = mt.value(i0);
  std::span<const double> mtv = mt.value(i1);
  Vector boundary = ek.front() * Eigen::Map<const Vector>(ms.data(), n) -
                    Eigen::Map<const Vector>(mtv.data(), n);
  rhs += boundary;

  return (lhs - rhs).cwiseAbs().maxCoeff();
}

}  // namespace levylab
