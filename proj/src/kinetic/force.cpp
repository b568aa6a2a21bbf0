#include "levylab/kinetic/force.hpp"

#include <cmath>
#include <stdexcept>

#include "levylab/kernels/kernels.hpp"

namespace levylab {
namespace {

// sgn(z)|z|^p, clipped to [-b, b]; p-Holder with constant 2^{1-p} before the
// 1-Lipschitz clip
double clipped_power(double z, double p, double b) {
  double m = std::pow(std::fabs(z), p);
  double v = z < 0 ? -m : m;
  return std::clamp(v, -b, b);
}

}  // namespace

KineticForceSpec KineticForceSpec::random(int d, double gamma, double beta_prime, double amplitude,
                                          double clip, std::uint64_t seed) {
  KineticForceSpec spec;
  spec.d = d;
  spec.gamma = gamma;
  spec.beta_prime = beta_prime;
  spec.clip = clip;
  kernels::CounterRng rng(seed, 424242);
  for (int i = 0; i < d; ++i) {
    RidgeTerm term;
    term.c_x = amplitude * (0.5 + rng.next_uniform());
    term.c_v = amplitude * (0.5 + rng.next_uniform());
    term.u = Vector(d);
    term.w = Vector(d);
    for (int c = 0; c < d; ++c) term.u[c] = 2.0 * rng.next_uniform() - 1.0;
    for (int c = 0; c < d; ++c) term.w[c] = 2.0 * rng.next_uniform() - 1.0;
    term.u.normalize();
    term.w.normalize();
    term.k_x = rng.next_uniform() - 0.5;
    term.k_v = rng.next_uniform() - 0.5;
    spec.terms.push_back(std::move(term));
  }
  return spec;
}

KineticForce::KineticForce(KineticForceSpec spec) : spec_(std::move(spec)) {
  if (!(spec_.gamma > 0 && spec_.gamma < 1) || !(spec_.beta_prime > 0 && spec_.beta_prime < 1)) {
    throw std::invalid_argument("KineticForce: exponents must lie in (0,1)");
  }
  if (spec_.d <= 0) throw std::invalid_argument("KineticForce: d must be positive");
  if (spec_.terms.size() != static_cast<std::size_t>(spec_.d)) {
    throw std::invalid_argument("KineticForce: need one ridge term per output component");
  }
  if (!(spec_.clip > 0)) throw std::invalid_argument("KineticForce: clip bound must be positive");

  // closed-form certificates: the x-part of component i is
  // (|c_i| 2^{1-gamma} |u_i|^gamma)-Holder in x; aggregate in l2 over i
  double sum_b = 0, sum_hx = 0, sum_hv = 0;
  for (const RidgeTerm& t : spec_.terms) {
    if (t.u.size() != spec_.d || t.w.size() != spec_.d) {
      throw std::invalid_argument("KineticForce: projection dimension mismatch");
    }
    double bi = (std::fabs(t.c_x) + std::fabs(t.c_v)) * spec_.clip;
    sum_b += bi * bi;
    double hx = std::fabs(t.c_x) * std::pow(2.0, 1.0 - spec_.gamma) *
                std::pow(t.u.norm(), spec_.gamma);
    double hv = std::fabs(t.c_v) * std::pow(2.0, 1.0 - spec_.beta_prime) *
                std::pow(t.w.norm(), spec_.beta_prime);
    sum_hx += hx * hx;
    sum_hv += hv * hv;
  }
  bound_ = std::sqrt(sum_b);
  holder_const_ = std::max(std::sqrt(sum_hx), std::sqrt(sum_hv));
}

void KineticForce::eval(std::span<const double> x, std::span<const double> v,
                        std::span<double> out) const {
  for (int i = 0; i < spec_.d; ++i) {
    const RidgeTerm& t = spec_.terms[i];
    double px = -t.k_x, pv = -t.k_v;
    for (int c = 0; c < spec_.d; ++c) px += t.u[c] * x[c];
    for (int c = 0; c < spec_.d; ++c) pv += t.w[c] * v[c];
    out[i] = t.c_x * clipped_power(px, spec_.gamma, spec_.clip) +
             t.c_v * clipped_power(pv, spec_.beta_prime, spec_.clip);
  }
}

Vector KineticForce::eval_vec(const Vector& x, const Vector& v) const {
  Vector out(spec_.d);
  eval({x.data(), size_t(x.size())}, {v.data(), size_t(v.size())}, {out.data(), size_t(out.size())});
  return out;
}

KineticForce holder_force_field(const KineticForceSpec& spec) { return KineticForce(spec); }

ForceModulus sample_force_modulus(const KineticForce& f, int n_pairs, double box_radius,
                                  std::uint64_t seed) {
  const int d = f.d();
  const auto& k = kernels::active();
  std::vector<double> us(static_cast<std::size_t>(n_pairs) * 4 * d);
  k.fill_uniform(seed, 31337, 0, us.size(), us.data());
  std::vector<double> x(d), v(d), x2(d), v2(d), fa(d), fb(d);
  ForceModulus out{0.0, 0.0};
  for (int p = 0; p < n_pairs; ++p) {
    const double* base = &us[static_cast<std::size_t>(p) * 4 * d];
    for (int c = 0; c < d; ++c) {
      x[c] = box_radius * (2.0 * base[c] - 1.0);
      v[c] = box_radius * (2.0 * base[d + c] - 1.0);
      x2[c] = box_radius * (2.0 * base[2 * d + c] - 1.0);
      v2[c] = box_radius * (2.0 * base[3 * d + c] - 1.0);
    }
    f.eval(x, v, fa);
    f.eval(x2, v2, fb);
    double dx = 0, dv = 0, df = 0, va = 0;
    for (int c = 0; c < d; ++c) {
      dx += (x[c] - x2[c]) * (x[c] - x2[c]);
      dv += (v[c] - v2[c]) * (v[c] - v2[c]);
      df += (fa[c] - fb[c]) * (fa[c] - fb[c]);
      va += fa[c] * fa[c];
    }
    out.max_value = std::max(out.max_value, std::sqrt(va));
    double denom = std::pow(std::sqrt(dx), f.gamma()) + std::pow(std::sqrt(dv), f.beta_prime());
    if (denom > 1e-12) out.max_quotient = std::max(out.max_quotient, std::sqrt(df) / denom);
  }
  return out;
}

}  // namespace levylab
