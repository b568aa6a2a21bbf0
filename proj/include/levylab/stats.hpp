#pragma once
// Small statistics toolbox for the Monte Carlo property checks.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace levylab::stats {

struct MeanSe {
  double mean;
  double se;  // standard error of the mean
  std::size_t n;
};

MeanSe mean_se(std::span<const double> xs);

double percentile(std::vector<double> xs, double q);  // q in [0,1], by copy

// Spearman rank correlation (average ranks on ties).
double spearman(std::span<const double> xs, std::span<const double> ys);

// Two-sample Kolmogorov-Smirnov p-value (asymptotic Kolmogorov distribution).
double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b);

// Chi-square goodness-of-fit p-value: observed counts vs expected counts.
// dof = #bins - 1 unless overridden.
double chi_square_pvalue(std::span<const double> observed, std::span<const double> expected,
                         int dof_override = -1);

double poisson_pmf(int k, double mean);
double normal_cdf(double x);
double normal_tail(double x);  // P(Z > x)

// empirical characteristic function (mean of e^{i<k,x>} over sample rows)
std::complex<double> empirical_cf(std::span<const double> samples, int dim,
                                  std::span<const double> k);

// least-squares slope of log(y) against log(x), for convergence-order fits
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace levylab::stats
