#include "levylab/levy/triplet.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace levylab {
namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
}

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

Vector jump_mean_small(const JumpDist& d, int dim) {
  if (const auto* pm = std::get_if<PointMassJump>(&d)) {
    if (pm->value.norm() <= 1.0) return pm->value;
    return Vector::Zero(dim);
  }
  Vector out = Vector::Zero(1);
  if (const auto* g = std::get_if<GaussianJump>(&d)) {
    double a = (-1.0 - g->mean) / g->sd;
    double b = (1.0 - g->mean) / g->sd;
    out[0] = g->mean * (normal_cdf(b) - normal_cdf(a)) + g->sd * (normal_pdf(a) - normal_pdf(b));
    return out;
  }
  if (const auto* u = std::get_if<UniformJump>(&d)) {
    double lo = std::max(u->lo, -1.0), hi = std::min(u->hi, 1.0);
    if (hi > lo) out[0] = (hi * hi - lo * lo) / (2.0 * (u->hi - u->lo));
    return out;
  }
  // Pareto: support (1, inf)
  return out;
}

ThetaMoment jump_abs_moment_large(const JumpDist& d, double theta) {
  if (const auto* pm = std::get_if<PointMassJump>(&d)) {
    double r = pm->value.norm();
    return {true, r > 1.0 ? std::pow(r, theta) : 0.0};
  }
  if (const auto* p = std::get_if<ParetoJump>(&d)) {
    if (theta >= p->index) return {false, std::numeric_limits<double>::infinity()};
    return {true, p->index / (p->index - theta)};
  }
  if (const auto* u = std::get_if<UniformJump>(&d)) {
    double total = 0;
    double width = u->hi - u->lo;
    if (u->hi > 1.0) {
      double lo = std::max(u->lo, 1.0);
      total += (std::pow(u->hi, theta + 1) - std::pow(lo, theta + 1)) / ((theta + 1) * width);
    }
    if (u->lo < -1.0) {
      double hi = std::min(u->hi, -1.0);
      total += (std::pow(-u->lo, theta + 1) - std::pow(-hi, theta + 1)) / ((theta + 1) * width);
    }
    return {true, total};
  }
  const auto& g = std::get<GaussianJump>(d);
  // finite for every theta; fixed-grid Simpson far into the tails
  auto pdf = [&](double x) { return normal_pdf((x - g.mean) / g.sd) / g.sd; };
  double total = 0;
  for (int side = 0; side < 2; ++side) {
    double a = 1.0, b = std::fabs(g.mean) + 12.0 * g.sd + 2.0;
    int n = 4000;  // even
    double h = (b - a) / n;
    double acc = 0;
    for (int i = 0; i <= n; ++i) {
      double x = a + i * h;
      double fx = std::pow(x, theta) * pdf(side == 0 ? x : -x);
      double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      acc += w * fx;
    }
    total += acc * h / 3.0;
  }
  return {true, total};
}

double jump_min1_sq(const JumpDist& d) {
  if (const auto* pm = std::get_if<PointMassJump>(&d)) {
    return std::min(1.0, pm->value.squaredNorm());
  }
  if (const auto* p = std::get_if<ParetoJump>(&d)) {
    (void)p;
    return 1.0;  // all mass beyond |x| = 1
  }
  if (const auto* u = std::get_if<UniformJump>(&d)) {
    double width = u->hi - u->lo;
    double lo = std::max(u->lo, -1.0), hi = std::min(u->hi, 1.0);
    double inner = 0;
    if (hi > lo) inner = (hi * hi * hi - lo * lo * lo) / (3.0 * width);
    double outer = 0;
    if (u->hi > 1.0) outer += (u->hi - std::max(u->lo, 1.0)) / width;
    if (u->lo < -1.0) outer += (std::min(u->hi, -1.0) - u->lo) / width;
    return inner + outer;
  }
  const auto& g = std::get<GaussianJump>(d);
  double a = (-1.0 - g.mean) / g.sd, b = (1.0 - g.mean) / g.sd;
  // E[X^2 1_{|X|<=1}] for X ~ N(mu, s^2), via standard truncated moments
  double phi_a = normal_pdf(a), phi_b = normal_pdf(b);
  double cdf = normal_cdf(b) - normal_cdf(a);
  double ez = (a * phi_a - b * phi_b);  // E[Z^2 1] = cdf + a phi(a) - b phi(b)
  double ez2 = cdf + ez;
  double ez1 = phi_a - phi_b;
  double ex2 = g.mean * g.mean * cdf + 2.0 * g.mean * g.sd * ez1 + g.sd * g.sd * ez2;
  return ex2 + (1.0 - cdf);
}

GeneratingTriplet::GeneratingTriplet(int dim, Matrix q, LevyMeasure measure)
    : dim_(dim), q_(std::move(q)), measure_(std::move(measure)) {
  require(dim_ >= 1, "triplet: dim must be >= 1");
  require(q_.rows() == dim_ && q_.cols() == dim_, "triplet: Q has wrong shape");
  require((q_ - q_.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + q_.cwiseAbs().maxCoeff()),
          "triplet: Q must be symmetric");

  Eigen::SelfAdjointEigenSolver<Matrix> es(q_);
  require(es.info() == Eigen::Success, "triplet: eigendecomposition of Q failed");
  Vector ev = es.eigenvalues();
  require(ev.minCoeff() >= -1e-12, "triplet: Q must be positive semidefinite");
  Vector sqrt_ev = ev.cwiseMax(0.0).cwiseSqrt();
  gauss_factor_ = es.eigenvectors() * sqrt_ev.asDiagonal();

  for (const LevyComponent& comp : measure_.components) {
    if (const auto* cp = std::get_if<CompoundPoissonComp>(&comp)) {
      require(cp->intensity > 0, "triplet: compound Poisson intensity must be positive");
      if (const auto* pm = std::get_if<PointMassJump>(&cp->jumps)) {
        require(pm->value.size() == dim_, "triplet: point mass dimension mismatch");
        require(pm->value.norm() > 0, "triplet: nu({0}) = 0 requires a nonzero point mass");
      } else {
        require(dim_ == 1, "triplet: scalar jump families need dim = 1");
        if (const auto* u = std::get_if<UniformJump>(&cp->jumps)) {
          require(u->hi > u->lo, "triplet: uniform jump range empty");
        }
        if (const auto* g = std::get_if<GaussianJump>(&cp->jumps)) {
          require(g->sd > 0, "triplet: gaussian jump sd must be positive");
        }
        if (const auto* p = std::get_if<ParetoJump>(&cp->jumps)) {
          require(p->index > 0, "triplet: pareto index must be positive");
        }
      }
    } else {
      const auto& st = std::get<SmallJumpStableComp>(comp);
      require(dim_ == 1, "triplet: small-jump stable component needs dim = 1");
      require(st.alpha > 0 && st.alpha < 2, "triplet: stable alpha must lie in (0,2)");
      require(st.scale > 0, "triplet: stable scale must be positive");
    }
  }
}

double GeneratingTriplet::nu_integrability_certificate() const {
  double total = 0;
  for (const LevyComponent& comp : measure_.components) {
    if (const auto* cp = std::get_if<CompoundPoissonComp>(&comp)) {
      total += cp->intensity * jump_min1_sq(cp->jumps);
    } else {
      const auto& st = std::get<SmallJumpStableComp>(comp);
      // integral x^2 * scale |x|^{-1-alpha} over |x| <= 1
      total += 2.0 * st.scale / (2.0 - st.alpha);
    }
  }
  return total;
}

bool GeneratingTriplet::theta_moment_finite(double theta) const {
  for (const LevyComponent& comp : measure_.components) {
    if (const auto* cp = std::get_if<CompoundPoissonComp>(&comp)) {
      if (!jump_abs_moment_large(cp->jumps, theta).finite) return false;
    }
  }
  return true;
}

}  // namespace levylab
