#include "levylab/integral/integral.hpp"

#include <cmath>
#include <stdexcept>

namespace levylab {
namespace {

// Integrate one driver component. Continuous increments get the left-node
// integrand; the jump part of an increment gets the exact sigma(u) weight so
// that jumps of the integral are sigma(u) dL_u bit for bit.
CadlagPath integrate_component(const MatrixIntegrand& sigma, const CadlagPath& comp,
                               const std::vector<Matrix>& sig_at_node) {
  const int n = sigma.rows();
  const int d = comp.dim();
  const std::size_t nodes = comp.nodes();

  std::vector<double> values(nodes * static_cast<std::size_t>(n), 0.0);
  std::vector<PathJump> jumps;
  jumps.reserve(comp.jumps().size());

  Vector acc = Vector::Zero(n);
  Vector dl(d), cont(d);
  std::size_t next_jump = 0;
  const auto& comp_jumps = comp.jumps();

  for (std::size_t i = 0; i + 1 < nodes; ++i) {
    std::span<const double> v0 = comp.value(i);
    std::span<const double> v1 = comp.value(i + 1);
    for (int c = 0; c < d; ++c) dl[c] = v1[c] - v0[c];

    const PathJump* jp = nullptr;
    while (next_jump < comp_jumps.size() && comp_jumps[next_jump].time < comp.time(i + 1) - 1e-12) {
      ++next_jump;  // jumps before the first integrated node (never happens for full paths)
    }
    if (next_jump < comp_jumps.size() &&
        std::fabs(comp_jumps[next_jump].time - comp.time(i + 1)) <= 1e-12) {
      jp = &comp_jumps[next_jump];
      ++next_jump;
    }

    if (jp != nullptr) {
      for (int c = 0; c < d; ++c) cont[c] = dl[c] - jp->delta[c];
      Vector jump_vec = sig_at_node[i + 1] * Eigen::Map<const Vector>(jp->delta.data(), d);
      acc += sig_at_node[i] * cont + jump_vec;
      jumps.push_back({comp.time(i + 1), to_std(jump_vec)});
    } else {
      acc += sig_at_node[i] * dl;
    }
    for (int c = 0; c < n; ++c) values[(i + 1) * n + c] = acc[c];
  }

  return CadlagPath(n, comp.times(), std::move(values), std::move(jumps));
}

}  // namespace

void IntegralDecomposition::validate() const {
  const std::size_t nodes = total.nodes();
  const int n = total.dim();
  for (std::size_t i = 0; i < nodes; ++i) {
    std::span<const double> a = small.value(i), b = gauss.value(i), c = large.value(i),
                            t = total.value(i);
    for (int k = 0; k < n; ++k) {
      if (std::fabs(a[k] + b[k] + c[k] - t[k]) > 1e-12 * (1.0 + std::fabs(t[k]))) {
        throw std::logic_error("IntegralDecomposition: total != I+J+K at a node");
      }
    }
  }
  if (!gauss.jumps().empty()) throw std::logic_error("IntegralDecomposition: J must be continuous");
}

IntegralDecomposition stochastic_integral(const MatrixIntegrand& sigma,
                                          const SampledLevyPath& driver) {
  if (sigma.cols() != driver.dim()) {
    throw std::invalid_argument("stochastic_integral: sigma/driver dimension mismatch");
  }
  const CadlagPath& grid_path = driver.total;
  const std::size_t nodes = grid_path.nodes();

  // integrand evaluated once per node, shared across components
  std::vector<Matrix> sig_at_node(nodes);
  for (std::size_t i = 0; i < nodes; ++i) sig_at_node[i] = sigma.eval(grid_path.time(i));

  IntegralDecomposition out;
  out.small = integrate_component(sigma, driver.small, sig_at_node);
  out.gauss = integrate_component(sigma, driver.gauss, sig_at_node);
  out.large = integrate_component(sigma, driver.large, sig_at_node);

  const int n = sigma.rows();
  std::vector<double> total_vals(nodes * static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < nodes * static_cast<std::size_t>(n); ++i) {
    total_vals[i] = out.small.values_flat()[i] + out.gauss.values_flat()[i] +
                    out.large.values_flat()[i];
  }
  std::vector<PathJump> all_jumps = out.small.jumps();
  all_jumps.insert(all_jumps.end(), out.large.jumps().begin(), out.large.jumps().end());
  out.total = CadlagPath(n, grid_path.times(), std::move(total_vals), std::move(all_jumps));
  return out;
}

IntegralDecomposition modified_integral(const Matrix& a, const MatrixIntegrand& sigma,
                                        const SampledLevyPath& driver) {
  return stochastic_integral(MatrixIntegrand::modified_by(a, sigma), driver);
}

}  // namespace levylab
