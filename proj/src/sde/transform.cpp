#include "levylab/sde/transform.hpp"

#include <cmath>

namespace levylab {
namespace {

CadlagPath map_path(const CadlagPath& p, const MatrixExp& expa, double sign) {
  const int n = p.dim();
  std::vector<double> values(p.nodes() * n);
  Vector v(n);
  for (std::size_t i = 0; i < p.nodes(); ++i) {
    const Matrix& e = expa.at(sign * p.time(i));
    std::span<const double> src = p.value(i);
    for (int c = 0; c < n; ++c) v[c] = src[c];
    Vector w = e * v;
    for (int c = 0; c < n; ++c) values[i * n + c] = w[c];
  }
  std::vector<PathJump> jumps;
  for (const PathJump& j : p.jumps()) {
    const Matrix& e = expa.at(sign * j.time);
    Vector d = e * Eigen::Map<const Vector>(j.delta.data(), n);
    jumps.push_back({j.time, to_std(d)});
  }
  return CadlagPath(n, p.times(), std::move(values), std::move(jumps));
}

double sampled_opnorm_sup(const MatrixExp& expa, double horizon, double sign) {
  double best = 0;
  const int kGrid = 128;
  for (int i = 0; i <= kGrid; ++i) {
    double t = horizon * i / kGrid;
    Eigen::JacobiSVD<Matrix> svd(expa.at(sign * t));
    best = std::max(best, svd.singularValues()(0));
  }
  return 1.05 * best;  // grid-sup safety margin
}

}  // namespace

CadlagPath ModifiedProblem::to_u(const CadlagPath& z) const { return map_path(z, *expa, -1.0); }
CadlagPath ModifiedProblem::to_z(const CadlagPath& u) const { return map_path(u, *expa, 1.0); }

ModifiedProblem transform_to_modified(const SdeProblem& problem) {
  problem.validate();
  const int n = problem.n;
  auto expa = std::make_shared<MatrixExp>(problem.a);

  ModifiedProblem out;
  out.expa = expa;

  if (problem.a.cwiseAbs().maxCoeff() == 0.0) {
    out.modified = problem;  // e^{tA} = I: nothing to do
    return out;
  }

  double kminus = sampled_opnorm_sup(*expa, problem.horizon, -1.0);
  double kplus = sampled_opnorm_sup(*expa, problem.horizon, 1.0);
  const HolderField& b = problem.drift;
  double bound_mod = kminus * b.bound();
  double holder_mod = kminus * b.holder_const() * std::pow(kplus, b.beta());

  HolderField::EvalFn eval = [expa, b, n](double r, std::span<const double> x,
                                          std::span<double> out_v) {
    Vector xv(n);
    for (int c = 0; c < n; ++c) xv[c] = x[c];
    Vector arg = expa->at(r) * xv;
    Vector bx = b.eval_vec(r, arg);
    Vector res = expa->at(-r) * bx;
    for (int c = 0; c < n; ++c) out_v[c] = res[c];
  };
  HolderField drift_mod = HolderField::custom(n, std::move(eval), bound_mod, b.beta(), holder_mod,
                                              true, "modified(" + b.family() + ")");

  out.modified = SdeProblem{n,
                            problem.d,
                            Matrix::Zero(n, n),
                            MatrixIntegrand::modified_by(problem.a, problem.sigma),
                            std::move(drift_mod),
                            problem.horizon};
  return out;
}

}  // namespace levylab
