#include <cmath>
#include <complex>
#include <functional>

#include "levylab/levy/triplet.hpp"

namespace levylab {
namespace {

using Complex = std::complex<double>;

// Adaptive Simpson; throws QuadratureError when the depth budget runs out.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int depth, double fa, double fm, double fb, double whole) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double err = left + right - whole;
  if (std::fabs(err) <= 15.0 * tol) return left + right + err / 15.0;
  if (depth <= 0) {
    throw QuadratureError("adaptive quadrature did not converge", std::fabs(err));
  }
  return adaptive_simpson(f, a, m, 0.5 * tol, depth - 1, fa, flm, fm, left) +
         adaptive_simpson(f, m, b, 0.5 * tol, depth - 1, fm, frm, fb, right);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, tol, 48, fa, fm, fb, whole);
}

// E e^{ikY} for Pareto(index) on (1,inf): quadrature on [1,X] plus one term
// of the integration-by-parts tail expansion.
Complex pareto_char_fn(double index, double k) {
  if (k == 0.0) return {1.0, 0.0};
  double ak = std::fabs(k);
  double x_cut = std::max(40.0, 600.0 / ak);
  auto re = [&](double x) { return std::cos(k * x) * index * std::pow(x, -index - 1.0); };
  auto im = [&](double x) { return std::sin(k * x) * index * std::pow(x, -index - 1.0); };
  double tol = 1e-10;
  Complex head(integrate(re, 1.0, x_cut, tol), integrate(im, 1.0, x_cut, tol));
  // tail: -alpha X^{-alpha-1} e^{ikX} / (ik), remainder O(alpha X^{-alpha-1}/k)
  Complex eikx(std::cos(k * x_cut), std::sin(k * x_cut));
  Complex tail = -index * std::pow(x_cut, -index - 1.0) * eikx / Complex(0.0, k);
  return head + tail;
}

// integral over the symmetric truncated-stable measure of (e^{ikx}-1-ikx):
// equals 2c * sum_{m>=1} (-k^2)^m / ((2m)! (2m - alpha)).
double stable_exponent_integral(const SmallJumpStableComp& st, double k) {
  if (k == 0.0) return 0.0;
  double k2 = k * k;
  if (std::fabs(k) <= 25.0) {
    double term = 1.0;  // running (-k^2)^m / (2m)!
    double total = 0.0;
    for (int m = 1; m <= 200; ++m) {
      term *= -k2 / ((2.0 * m - 1.0) * (2.0 * m));
      double contrib = term / (2.0 * m - st.alpha);
      total += contrib;
      if (std::fabs(contrib) < 1e-18 * (1.0 + std::fabs(total))) break;
    }
    return 2.0 * st.scale * total;
  }
  // large |k|: split at delta = 1/|k|, series on [0,delta], quadrature above
  double ak = std::fabs(k);
  double delta = 1.0 / ak;
  double term = 1.0, head = 0.0;
  for (int m = 1; m <= 60; ++m) {
    term *= -1.0 / ((2.0 * m - 1.0) * (2.0 * m));  // (-1)^m (k delta)^{2m} / (2m)! with k delta = 1
    double contrib = term * std::pow(delta, -st.alpha) / (2.0 * m - st.alpha);
    head += contrib;
    if (std::fabs(contrib) < 1e-18) break;
  }
  head *= 2.0 * st.scale;
  auto f = [&](double x) { return (std::cos(k * x) - 1.0) * std::pow(x, -1.0 - st.alpha); };
  double tail = 2.0 * st.scale * integrate(f, delta, 1.0, 1e-11);
  return head + tail;
}

}  // namespace

Complex jump_char_fn(const JumpDist& d, const Vector& k) {
  if (const auto* pm = std::get_if<PointMassJump>(&d)) {
    double kx = k.dot(pm->value);
    return {std::cos(kx), std::sin(kx)};
  }
  double k1 = k[0];
  if (const auto* g = std::get_if<GaussianJump>(&d)) {
    double mag = std::exp(-0.5 * g->sd * g->sd * k1 * k1);
    return {mag * std::cos(g->mean * k1), mag * std::sin(g->mean * k1)};
  }
  if (const auto* u = std::get_if<UniformJump>(&d)) {
    if (k1 == 0.0) return {1.0, 0.0};
    Complex i(0.0, 1.0);
    Complex num = std::exp(i * (k1 * u->hi)) - std::exp(i * (k1 * u->lo));
    return num / (i * k1 * (u->hi - u->lo));
  }
  const auto& p = std::get<ParetoJump>(d);
  return pareto_char_fn(p.index, k1);
}

Complex levy_exponent(const GeneratingTriplet& triplet, const Vector& k) {
  if (k.size() != triplet.dim()) throw std::invalid_argument("levy_exponent: k dimension mismatch");
  Complex phi(0.5 * k.dot(triplet.q() * k), 0.0);
  for (const LevyComponent& comp : triplet.measure().components) {
    if (const auto* cp = std::get_if<CompoundPoissonComp>(&comp)) {
      Complex cf = jump_char_fn(cp->jumps, k);
      Vector ms = jump_mean_small(cp->jumps, triplet.dim());
      Complex integral = cp->intensity * (cf - 1.0 - Complex(0.0, k.dot(ms)));
      phi -= integral;
    } else {
      const auto& st = std::get<SmallJumpStableComp>(comp);
      phi -= stable_exponent_integral(st, k[0]);
    }
  }
  return phi;
}

ThetaMoment theta_moment(const GeneratingTriplet& triplet, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw std::invalid_argument("theta_moment: theta must lie in (0,1)");
  }
  double total = 0;
  for (const LevyComponent& comp : triplet.measure().components) {
    if (const auto* cp = std::get_if<CompoundPoissonComp>(&comp)) {
      ThetaMoment m = jump_abs_moment_large(cp->jumps, theta);
      if (!m.finite) return {false, std::numeric_limits<double>::infinity()};
      total += cp->intensity * m.value;
    }
    // truncated stable components carry no jumps beyond |x| = 1
  }
  return {true, total};
}

}  // namespace levylab
