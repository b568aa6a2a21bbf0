#include "levylab/sde/holder_field.hpp"

#include <cmath>
#include <stdexcept>

#include "levylab/kernels/kernels.hpp"

namespace levylab {

Vector HolderField::eval_vec(double t, const Vector& x) const {
  Vector out(n_);
  eval(t, {x.data(), static_cast<std::size_t>(x.size())}, {out.data(), size_t(n_)});
  return out;
}

HolderField HolderField::zero(int n) {
  return custom(
      n, [](double, std::span<const double>, std::span<double> out) {
        for (double& v : out) v = 0.0;
      },
      0.0, 1.0, 0.0, false, "zero");
}

HolderField HolderField::constant(Vector c) {
  int n = static_cast<int>(c.size());
  return custom(
      n,
      [c = std::move(c)](double, std::span<const double>, std::span<double> out) {
        for (int i = 0; i < c.size(); ++i) out[i] = c[i];
      },
      c.norm(), 1.0, 0.0, false, "constant");
}

HolderField HolderField::sinusoid(int n, double amp, double freq) {
  return custom(
      n,
      [amp, freq](double, std::span<const double> x, std::span<double> out) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = amp * std::sin(freq * x[i]);
      },
      amp * std::sqrt(double(n)), 1.0, amp * freq, false, "sinusoid");
}

HolderField HolderField::custom(int n, EvalFn eval, double bound, double beta, double holder_const,
                                bool time_dependent, std::string family) {
  if (n <= 0) throw std::invalid_argument("HolderField: dimension must be positive");
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("HolderField: beta in (0,1]");
  HolderField f;
  f.n_ = n;
  f.eval_ = std::move(eval);
  f.bound_ = bound;
  f.beta_ = beta;
  f.holder_const_ = holder_const;
  f.time_dependent_ = time_dependent;
  f.family_ = std::move(family);
  return f;
}

SampledModulus sample_field_modulus(const HolderField& field, double horizon, int t_slices,
                                    int n_pairs, double box_radius, std::uint64_t seed) {
  const int n = field.n();
  const auto& k = kernels::active();
  std::vector<double> us(static_cast<std::size_t>(n_pairs) * 2 * n);
  std::vector<double> bx(n), by(n), x(n), y(n);
  SampledModulus out{0.0, 0.0};
  for (int ts = 0; ts <= t_slices; ++ts) {
    double t = t_slices == 0 ? 0.0 : horizon * ts / t_slices;
    k.fill_uniform(seed, 1000 + ts, 0, us.size(), us.data());
    for (int p = 0; p < n_pairs; ++p) {
      for (int c = 0; c < n; ++c) {
        x[c] = box_radius * (2.0 * us[(p * 2) * n + c] - 1.0);
        y[c] = box_radius * (2.0 * us[(p * 2 + 1) * n + c] - 1.0);
      }
      field.eval(t, x, bx);
      field.eval(t, y, by);
      double dist = 0, diff = 0, vb = 0;
      for (int c = 0; c < n; ++c) {
        dist += (x[c] - y[c]) * (x[c] - y[c]);
        diff += (bx[c] - by[c]) * (bx[c] - by[c]);
        vb += bx[c] * bx[c];
      }
      dist = std::sqrt(dist);
      diff = std::sqrt(diff);
      out.max_value = std::max(out.max_value, std::sqrt(vb));
      if (dist > 1e-12) {
        out.max_quotient = std::max(out.max_quotient, diff / std::pow(dist, field.beta()));
      }
    }
  }
  return out;
}

namespace {

// C^2 ramp: 1 for u <= 0, 0 for u >= 1, quintic smoothstep in between
// (max |derivative| = 15/8).
double ramp_down(double u) {
  if (u <= 0.0) return 1.0;
  if (u >= 1.0) return 0.0;
  double s = u * u * u * (u * (u * 6.0 - 15.0) + 10.0);
  return 1.0 - s;
}

}  // namespace

HolderField localize_drift(const LocallyHolderField& field, double radius, double margin) {
  if (!(radius > 0) || !(margin > 0)) {
    throw std::invalid_argument("localize_drift: radius and margin must be positive");
  }
  double outer = radius + margin;
  double lip_eta = 1.875 / margin;
  double bound_loc = field.bound_on_ball(outer);
  double holder_loc = field.holder_const_on_ball(outer);
  double beta = field.beta;
  // product rule: [eta b]_beta <= [b]_beta,loc + ||b||_loc * Lip(eta)^beta
  // (the Lip^beta factor covers pairs at every separation, since the cutoff
  // difference is also bounded by 1)
  double holder_cert = holder_loc + bound_loc * std::pow(lip_eta, beta);

  auto eval = [inner = field.eval, radius, margin](double t, std::span<const double> x,
                                                   std::span<double> out) {
    double r = 0;
    for (double v : x) r += v * v;
    r = std::sqrt(r);
    double eta = ramp_down((r - radius) / margin);
    if (eta == 0.0) {
      for (double& v : out) v = 0.0;
      return;
    }
    inner(t, x, out);
    for (double& v : out) v *= eta;
  };
  return HolderField::custom(field.n, std::move(eval), bound_loc, beta, holder_cert,
                             field.time_dependent, "localized(" + field.family + ")");
}

}  // namespace levylab
