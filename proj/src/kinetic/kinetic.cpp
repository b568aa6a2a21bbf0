#include "levylab/kinetic/kinetic.hpp"

#include <cmath>
#include <stdexcept>

namespace levylab {

GeneratingTriplet kinetic_triplet(int d) { return GeneratingTriplet::brownian(d); }

SdeProblem make_kinetic_problem(const KineticForce& force, double horizon) {
  const int d = force.d();
  const int n = 2 * d;
  Matrix a = Matrix::Zero(n, n);
  a.block(0, d, d, d) = Matrix::Identity(d, d);
  Matrix c = Matrix::Zero(n, d);
  c.block(d, 0, d, d) = Matrix::Identity(d, d);

  // b(x,v) = (0; F(x,v)): gamma-Holder in x and beta'-Holder in v with the
  // same constant; as a single-exponent field use beta = min(gamma, beta')
  // with constant 2*C + 2*||F|| (covers separations above and below 1)
  double beta = std::min(force.gamma(), force.beta_prime());
  double holder_cert = 2.0 * force.holder_const() + 2.0 * force.bound();
  HolderField::EvalFn eval = [force, d](double, std::span<const double> z, std::span<double> out) {
    for (int c0 = 0; c0 < d; ++c0) out[c0] = 0.0;
    std::span<double> fv(out.data() + d, static_cast<std::size_t>(d));
    force.eval(z.subspan(0, d), z.subspan(d, d), fv);
  };
  HolderField drift =
      HolderField::custom(n, std::move(eval), force.bound(), beta, holder_cert, false, "kinetic");

  return SdeProblem{n, d, std::move(a), MatrixIntegrand::constant(std::move(c)), std::move(drift),
                    horizon};
}

CadlagPath KineticSolution::combined() const {
  const int n = 2 * d;
  std::vector<double> values(times.size() * n);
  for (std::size_t i = 0; i < times.size(); ++i) {
    for (int c = 0; c < d; ++c) {
      values[i * n + c] = x[i * d + c];
      values[i * n + d + c] = v[i * d + c];
    }
  }
  return CadlagPath(n, times, std::move(values), {});
}

KineticSolution explicit_kinetic_solve(const KineticForce& force, const CadlagPath& w,
                                       const Vector& x0, const Vector& v0, double dt) {
  if (!w.jumps().empty()) {
    throw std::invalid_argument("explicit_kinetic_solve: W must be continuous");
  }
  const int d = force.d();
  if (w.dim() != d || x0.size() != d || v0.size() != d) {
    throw std::invalid_argument("explicit_kinetic_solve: dimension mismatch");
  }

  // solver nodes on the W grid at spacing dt
  std::vector<std::size_t> idx;
  double horizon = w.horizon();
  long steps = std::lround(horizon / dt);
  for (long l = 0; l <= steps; ++l) idx.push_back(w.index_of(std::min(l * dt, horizon)));

  const std::size_t nn = idx.size();
  KineticSolution sol;
  sol.d = d;
  sol.times.resize(nn);
  sol.x.assign(nn * d, 0.0);
  sol.v.assign(nn * d, 0.0);

  // running accumulators: p = int F ds, q = int s F ds, r = int W ds
  Vector p = Vector::Zero(d), q = Vector::Zero(d), r = Vector::Zero(d);
  Vector xk = x0, vk = v0, f_here(d), f_pred(d);
  Vector x_pred(d), v_pred(d);

  for (std::size_t j = 0; j < nn; ++j) {
    double t = w.time(idx[j]);
    sol.times[j] = t;
    for (int c = 0; c < d; ++c) {
      sol.x[j * d + c] = xk[c];
      sol.v[j * d + c] = vk[c];
    }
    if (j + 1 == nn) break;

    double t1 = w.time(idx[j + 1]);
    double h = t1 - t;
    std::span<const double> w_here = w.value(idx[j]);
    std::span<const double> w_next = w.value(idx[j + 1]);

    f_here = force.eval_vec(xk, vk);

    // predictor: left-point accumulators at t1
    Vector p_pred = p + h * f_here;
    Vector q_pred = q + h * t * f_here;
    Vector r_next = r;
    for (int c = 0; c < d; ++c) r_next[c] += 0.5 * h * (w_here[c] + w_next[c]);
    for (int c = 0; c < d; ++c) {
      x_pred[c] = x0[c] + t1 * v0[c] + t1 * p_pred[c] - q_pred[c] + r_next[c];
      v_pred[c] = v0[c] + p_pred[c] + w_next[c];
    }
    // corrector: trapezoid in s for both F-integrals
    f_pred = force.eval_vec(x_pred, v_pred);
    p += 0.5 * h * (f_here + f_pred);
    q += 0.5 * h * (t * f_here + t1 * f_pred);
    r = r_next;
    for (int c = 0; c < d; ++c) {
      xk[c] = x0[c] + t1 * v0[c] + t1 * p[c] - q[c] + r[c];
      vk[c] = v0[c] + p[c] + w_next[c];
    }
  }
  return sol;
}

}  // namespace levylab
