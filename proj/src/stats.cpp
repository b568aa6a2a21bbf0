#include "levylab/stats.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "levylab/kernels/kernels.hpp"

namespace levylab::stats {

MeanSe mean_se(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n == 0) return {0.0, 0.0, 0};
  const auto& k = kernels::active();
  double mean = k.sum(xs.data(), n) / double(n);
  if (n == 1) return {mean, 0.0, 1};
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  double var = ss / double(n - 1);
  return {mean, std::sqrt(var / double(n)), n};
}

double percentile(std::vector<double> xs, double q) {
  if (xs.empty()) throw std::invalid_argument("percentile of empty sample");
  std::sort(xs.begin(), xs.end());
  double pos = q * double(xs.size() - 1);
  std::size_t lo = static_cast<std::size_t>(pos);
  std::size_t hi = std::min(lo + 1, xs.size() - 1);
  double w = pos - double(lo);
  return (1.0 - w) * xs[lo] + w * xs[hi];
}

namespace {

std::vector<double> ranks(std::span<const double> xs) {
  const std::size_t n = xs.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> r(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && xs[idx[j + 1]] == xs[idx[i]]) ++j;
    double avg = 0.5 * (double(i) + double(j)) + 1.0;
    for (std::size_t t = i; t <= j; ++t) r[idx[t]] = avg;
    i = j + 1;
  }
  return r;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("spearman: need two samples of equal size >= 2");
  }
  std::vector<double> rx = ranks(xs), ry = ranks(ys);
  return pearson(rx, ry);
}

double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) {
      ++i;
    } else {
      ++j;
    }
    double fa = double(i) / double(a.size());
    double fb = double(j) / double(b.size());
    d = std::max(d, std::fabs(fa - fb));
  }
  double ne = double(a.size()) * double(b.size()) / double(a.size() + b.size());
  double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
  double p = 0;
  for (int k = 1; k <= 100; ++k) {
    double term = 2.0 * std::pow(-1.0, k - 1) * std::exp(-2.0 * k * k * lambda * lambda);
    p += term;
    if (std::fabs(term) < 1e-12) break;
  }
  return std::clamp(p, 0.0, 1.0);
}

double chi_square_pvalue(std::span<const double> observed, std::span<const double> expected,
                         int dof_override) {
  if (observed.size() != expected.size() || observed.empty()) {
    throw std::invalid_argument("chi_square: size mismatch");
  }
  double stat = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] <= 0) throw std::invalid_argument("chi_square: nonpositive expected count");
    double d = observed[i] - expected[i];
    stat += d * d / expected[i];
  }
  int dof = dof_override > 0 ? dof_override : static_cast<int>(observed.size()) - 1;
  return boost::math::gamma_q(0.5 * dof, 0.5 * stat);
}

double poisson_pmf(int k, double mean) {
  if (k < 0) return 0.0;
  double logp = -mean + k * std::log(mean) - std::lgamma(double(k) + 1.0);
  return std::exp(logp);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
double normal_tail(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

std::complex<double> empirical_cf(std::span<const double> samples, int dim,
                                  std::span<const double> k) {
  if (dim <= 0 || samples.size() % static_cast<std::size_t>(dim) != 0 ||
      k.size() != static_cast<std::size_t>(dim)) {
    throw std::invalid_argument("empirical_cf: shape mismatch");
  }
  const std::size_t n = samples.size() / static_cast<std::size_t>(dim);
  double re = 0, im = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double kx = 0;
    for (int c = 0; c < dim; ++c) kx += k[c] * samples[i * dim + c];
    re += std::cos(kx);
    im += std::sin(kx);
  }
  return {re / double(n), im / double(n)};
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: bad input");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0 || y[i] <= 0) continue;
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  if (lx.size() < 2) return 0.0;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= double(lx.size());
  my /= double(lx.size());
  double num = 0, den = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  return den == 0 ? 0.0 : num / den;
}

}  // namespace levylab::stats
