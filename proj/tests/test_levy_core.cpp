// Triplet validation, the characteristic exponent against hand-derived
// values and the empirical characteristic function, theta moments, and the
// path sampler's distributional properties.

#include <cmath>
#include <complex>

#include "doctest.h"
#include "levylab/levy/sampler.hpp"
#include "levylab/stats.hpp"
#include "test_util.hpp"

using namespace levylab;

namespace {

Vector vec1(double x) {
  Vector v(1);
  v[0] = x;
  return v;
}

GeneratingTriplet point_mass_cp(double intensity, double jump) {
  LevyMeasure m;
  m.components.push_back(CompoundPoissonComp{intensity, PointMassJump{vec1(jump)}});
  return GeneratingTriplet(1, Matrix::Zero(1, 1), std::move(m));
}

// empirical characteristic function of L_1 over an ensemble
std::complex<double> sample_ecf(const GeneratingTriplet& t, double k, int n_paths,
                                std::uint64_t master, double* se_out,
                                SamplerOptions opts = {}) {
  std::vector<double> l1(n_paths);
  for (int p = 0; p < n_paths; ++p) {
    SampledLevyPath path = sample_levy_path(t, 1.0, 8, derive_path_seed(master, p), opts);
    l1[p] = path.total.value(path.total.nodes() - 1)[0];
  }
  std::complex<double> ecf = stats::empirical_cf(l1, 1, std::vector<double>{k});
  if (se_out) *se_out = std::sqrt(std::max(0.0, 1.0 - std::norm(ecf)) / double(n_paths));
  return ecf;
}

}  // namespace

TEST_CASE("triplet construction validates its inputs") {
  Matrix asym(2, 2);
  asym << 1, 0.5, 0.0, 1;
  CHECK_THROWS_AS(GeneratingTriplet(2, asym, {}), std::invalid_argument);

  Matrix indef(2, 2);
  indef << 1, 0, 0, -0.5;
  CHECK_THROWS_AS(GeneratingTriplet(2, indef, {}), std::invalid_argument);

  LevyMeasure bad_intensity;
  bad_intensity.components.push_back(CompoundPoissonComp{-1.0, PointMassJump{vec1(3)}});
  CHECK_THROWS_AS(GeneratingTriplet(1, Matrix::Zero(1, 1), bad_intensity), std::invalid_argument);

  LevyMeasure zero_mass;
  zero_mass.components.push_back(CompoundPoissonComp{1.0, PointMassJump{Vector::Zero(1)}});
  CHECK_THROWS_AS(GeneratingTriplet(1, Matrix::Zero(1, 1), zero_mass), std::invalid_argument);

  LevyMeasure bad_alpha;
  bad_alpha.components.push_back(SmallJumpStableComp{2.5, 0.1});
  CHECK_THROWS_AS(GeneratingTriplet(1, Matrix::Zero(1, 1), bad_alpha), std::invalid_argument);

  // scalar families need d = 1
  LevyMeasure scalar_fam;
  scalar_fam.components.push_back(CompoundPoissonComp{1.0, GaussianJump{0.0, 1.0}});
  CHECK_THROWS_AS(GeneratingTriplet(2, Matrix::Identity(2, 2), scalar_fam), std::invalid_argument);
}

TEST_CASE("nu integrability certificate has the closed-form values") {
  // truncated stable: integral x^2 nu(dx) = 2c/(2-alpha)
  LevyMeasure m;
  m.components.push_back(SmallJumpStableComp{1.2, 0.05});
  GeneratingTriplet t(1, Matrix::Zero(1, 1), m);
  CHECK(t.nu_integrability_certificate() == doctest::Approx(2.0 * 0.05 / 0.8).epsilon(1e-12));

  // point mass at 3 (|x| > 1): min(1,|x|^2) = 1 per unit intensity
  GeneratingTriplet cp = point_mass_cp(2.0, 3.0);
  CHECK(cp.nu_integrability_certificate() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("levy exponent: pure Gaussian and zero cases") {
  GeneratingTriplet gauss = GeneratingTriplet::brownian(2);
  Vector k(2);
  k << 1, 1;
  std::complex<double> phi = levy_exponent(gauss, k);
  CHECK(phi.real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(phi.imag() == doctest::Approx(0.0).epsilon(1e-14));

  GeneratingTriplet zero = GeneratingTriplet::deterministic_zero(1);
  CHECK(std::abs(levy_exponent(zero, vec1(0.7))) == doctest::Approx(0.0));
}

TEST_CASE("levy exponent: compound Poisson with point mass +3") {
  // |y| = 3 > 1 removes the compensator: phi = -lambda (e^{i k 3} - 1)
  GeneratingTriplet t = point_mass_cp(2.0, 3.0);
  std::complex<double> phi = levy_exponent(t, vec1(0.5));
  std::complex<double> expected = -2.0 * (std::exp(std::complex<double>(0, 1.5)) - 1.0);
  CHECK(std::abs(phi - expected) < 1e-13);

  // cross-check against the empirical characteristic function
  double se = 0;
  std::complex<double> ecf = sample_ecf(t, 0.5, 100000, 99, &se);
  CHECK(std::abs(ecf - std::exp(-phi)) < 5.0 * se);
}

TEST_CASE("theta moments") {
  GeneratingTriplet none = GeneratingTriplet::brownian(1);
  ThetaMoment m0 = theta_moment(none, 0.5);
  CHECK(m0.finite);
  CHECK(m0.value == 0.0);

  // point-mass integral by hand: lambda * 3^theta
  ThetaMoment m1 = theta_moment(point_mass_cp(2.0, 3.0), 0.5);
  CHECK(m1.finite);
  CHECK(m1.value == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-12));

  // Pareto tail index 0.3 < theta = 0.5: infinite
  LevyMeasure pareto;
  pareto.components.push_back(CompoundPoissonComp{2.0, ParetoJump{0.3}});
  GeneratingTriplet tp(1, Matrix::Zero(1, 1), pareto);
  ThetaMoment m2 = theta_moment(tp, 0.5);
  CHECK_FALSE(m2.finite);
  CHECK(tp.theta_moment_finite(0.2));  // below the tail index it is finite

  CHECK_THROWS_AS(theta_moment(none, 1.5), std::invalid_argument);
}

TEST_CASE("deterministic zero triplet gives the zero path") {
  GeneratingTriplet zero = GeneratingTriplet::deterministic_zero(2);
  SampledLevyPath p = sample_levy_path(zero, 1.0, 64, 5);
  CHECK(p.total.jumps().empty());
  for (std::size_t i = 0; i < p.total.nodes(); ++i) {
    CHECK(p.total.value(i)[0] == 0.0);
    CHECK(p.total.value(i)[1] == 0.0);
  }
}

TEST_CASE("sampling is deterministic and jump records are grid-independent") {
  GeneratingTriplet t = point_mass_cp(2.0, 3.0);
  SampledLevyPath a = sample_levy_path(t, 1.0, 100, 1234);
  SampledLevyPath b = sample_levy_path(t, 1.0, 100, 1234);
  REQUIRE(a.total.nodes() == b.total.nodes());
  CHECK(a.total.values_flat() == b.total.values_flat());

  SampledLevyPath c = sample_levy_path(t, 1.0, 200, 1234);
  REQUIRE(a.total.jumps().size() == c.total.jumps().size());
  for (std::size_t i = 0; i < a.total.jumps().size(); ++i) {
    CHECK(a.total.jumps()[i].time == c.total.jumps()[i].time);
    CHECK(a.total.jumps()[i].delta == c.total.jumps()[i].delta);
  }
}

TEST_CASE("path invariants: L0 = 0, jumps on grid, left limits") {
  LevyMeasure m;
  m.components.push_back(CompoundPoissonComp{3.0, UniformJump{-2.0, 2.0}});
  GeneratingTriplet t(1, Matrix::Identity(1, 1), m);
  SampledLevyPath p = sample_levy_path(t, 1.0, 128, 77);
  p.total.validate();
  CHECK(p.total.value(0)[0] == 0.0);
  for (const PathJump& j : p.total.jumps()) {
    std::size_t i = p.total.index_of(j.time);
    std::vector<double> left = p.total.left_limit(i);
    CHECK(left[0] + j.delta[0] == doctest::Approx(p.total.value(i)[0]).epsilon(1e-12));
  }
  // decomposition is consistent at all nodes
  for (std::size_t i = 0; i < p.total.nodes(); ++i) {
    double sum = p.small.value(i)[0] + p.gauss.value(i)[0] + p.large.value(i)[0];
    CHECK(sum == doctest::Approx(p.total.value(i)[0]).epsilon(1e-12));
  }
}

TEST_CASE("poisson jump counts match the exact pmf (chi-square)") {
  GeneratingTriplet t = point_mass_cp(2.0, 3.0);
  const int n_paths = 20000;
  std::vector<int> counts;
  int max_count = 0;
  for (int p = 0; p < n_paths; ++p) {
    SampledLevyPath path = sample_levy_path(t, 1.0, 4, derive_path_seed(4321, p));
    int c = static_cast<int>(path.total.jumps().size());
    counts.push_back(c);
    max_count = std::max(max_count, c);
  }
  // bins 0..9 and 10+
  const int bins = 11;
  std::vector<double> observed(bins, 0.0), expected(bins, 0.0);
  for (int c : counts) observed[std::min(c, bins - 1)] += 1.0;
  double tail = 1.0;
  for (int k = 0; k < bins - 1; ++k) {
    expected[k] = n_paths * stats::poisson_pmf(k, 2.0);
    tail -= stats::poisson_pmf(k, 2.0);
  }
  expected[bins - 1] = n_paths * std::max(tail, 1e-12);
  double p_value = stats::chi_square_pvalue(observed, expected);
  CHECK(p_value > 0.01);
}

TEST_CASE("Brownian variance at t=1") {
  GeneratingTriplet t = GeneratingTriplet::brownian(1);
  const int n_paths = 10000;
  std::vector<double> l1(n_paths);
  for (int p = 0; p < n_paths; ++p) {
    SampledLevyPath path = sample_levy_path(t, 1.0, 64, derive_path_seed(2222, p));
    l1[p] = path.total.value(path.total.nodes() - 1)[0];
  }
  double mean = 0, var = 0;
  for (double v : l1) mean += v;
  mean /= n_paths;
  for (double v : l1) var += (v - mean) * (v - mean);
  var /= n_paths - 1;
  CHECK(std::fabs(var - 1.0) < 0.05);
}

TEST_CASE("increment stationarity and independence") {
  LevyMeasure m;
  m.components.push_back(CompoundPoissonComp{1.0, GaussianJump{0.0, 1.5}});
  GeneratingTriplet t(1, 0.5 * Matrix::Identity(1, 1), m);
  const int n_paths = 10000;
  std::vector<double> inc_a(n_paths), inc_b(n_paths);
  for (int p = 0; p < n_paths; ++p) {
    SampledLevyPath path = sample_levy_path(t, 1.0, 64, derive_path_seed(31415, p));
    const CadlagPath& tp = path.total;
    double v25 = tp.value(tp.index_of(0.25))[0];
    double v50 = tp.value(tp.index_of(0.5))[0];
    double v75 = tp.value(tp.index_of(0.75))[0];
    inc_a[p] = v50 - v25;
    inc_b[p] = v75 - v50;
  }
  // same-law increments at different anchor times
  CHECK(stats::ks_two_sample_pvalue(inc_a, inc_b) > 0.01);
  // disjoint increments are uncorrelated
  stats::MeanSe ma = stats::mean_se(inc_a), mb = stats::mean_se(inc_b);
  double cov = 0;
  for (int p = 0; p < n_paths; ++p) cov += (inc_a[p] - ma.mean) * (inc_b[p] - mb.mean);
  cov /= n_paths - 1;
  double se_cov = std::sqrt(1.0 / double(n_paths));  // scaled by the increment sds below
  double sd_a = ma.se * std::sqrt(double(n_paths));
  double sd_b = mb.se * std::sqrt(double(n_paths));
  CHECK(std::fabs(cov) <= 3.0 * se_cov * sd_a * sd_b);
}

TEST_CASE("empirical cf matches exp(-phi) for a Gaussian + compound Poisson mixture") {
  LevyMeasure m;
  m.components.push_back(CompoundPoissonComp{1.5, UniformJump{-1.5, 2.5}});
  GeneratingTriplet t(1, 0.25 * Matrix::Identity(1, 1), m);
  for (double k : {0.4, 0.9, 1.7, 2.5, 3.3}) {
    double se = 0;
    std::complex<double> ecf = sample_ecf(t, k, 30000, static_cast<std::uint64_t>(k * 1000), &se);
    std::complex<double> expected = std::exp(-levy_exponent(t, vec1(k)));
    CHECK(std::abs(ecf - expected) < 5.0 * se + 1e-9);
  }
}

TEST_CASE("truncated stable sampling matches the truncated exponent") {
  LevyMeasure m;
  m.components.push_back(SmallJumpStableComp{1.2, 0.05});
  GeneratingTriplet t(1, Matrix::Zero(1, 1), m);
  SamplerOptions opts;  // truncate at eps = 1e-3

  for (double k : {1.0, 3.0}) {
    // independent quadrature oracle for the sampled (truncated) law:
    // phi_eps(k) = -2c int_eps^1 (cos(kx)-1) x^{-1-alpha} dx
    const double alpha = 1.2, c = 0.05, eps = opts.epsilon;
    const int nq = 20000;
    double acc = 0;
    for (int i = 0; i < nq; ++i) {
      double x0 = eps + (1.0 - eps) * i / nq;
      double x1 = eps + (1.0 - eps) * (i + 1) / nq;
      double xm = 0.5 * (x0 + x1);
      auto f = [&](double x) { return (std::cos(k * x) - 1.0) * std::pow(x, -1.0 - alpha); };
      acc += (x1 - x0) / 6.0 * (f(x0) + 4.0 * f(xm) + f(x1));
    }
    double phi_eps = -2.0 * c * acc;

    double se = 0;
    std::complex<double> ecf = sample_ecf(t, k, 20000, 1000 + int(k * 10), &se, opts);
    CHECK(std::abs(ecf - std::exp(-std::complex<double>(phi_eps, 0.0))) < 5.0 * se + 1e-9);

    // truncation error of the exponent is controlled by c k^2 eps^{2-alpha}/(2-alpha)
    double phi_full = levy_exponent(t, vec1(k)).real();
    CHECK(std::fabs(phi_full - phi_eps) <= c * k * k * std::pow(eps, 2.0 - alpha) / (2.0 - alpha) *
                                               1.01);
  }
}

TEST_CASE("gaussian surrogate adds the matched variance") {
  LevyMeasure m;
  m.components.push_back(SmallJumpStableComp{1.5, 0.05});
  GeneratingTriplet t(1, Matrix::Zero(1, 1), m);
  SamplerOptions trunc, sur;
  sur.strategy = SmallJumpStrategy::gaussian_surrogate;
  // variance of L_1: truncated part 2c (1-eps^{2-a})/(2-a), surrogate restores
  // the full 2c/(2-a)
  const double alpha = 1.5, c = 0.05, eps = 1e-3;
  double var_trunc = 2 * c * (1.0 - std::pow(eps, 2.0 - alpha)) / (2.0 - alpha);
  double var_full = var_trunc + 2 * c * std::pow(eps, 2.0 - alpha) / (2.0 - alpha);
  const int n_paths = 20000;
  double acc_t = 0, acc_s = 0;
  for (int p = 0; p < n_paths; ++p) {
    std::uint64_t seed = derive_path_seed(808, p);
    SampledLevyPath a = sample_levy_path(t, 1.0, 16, seed, trunc);
    SampledLevyPath b = sample_levy_path(t, 1.0, 16, seed, sur);
    double va = a.total.value(a.total.nodes() - 1)[0];
    double vb = b.total.value(b.total.nodes() - 1)[0];
    acc_t += va * va;
    acc_s += vb * vb;
  }
  acc_t /= n_paths;
  acc_s /= n_paths;
  // se of a variance estimate ~ sqrt(2/n) * var
  CHECK(std::fabs(acc_t - var_trunc) < 5.0 * var_trunc * std::sqrt(2.0 / n_paths) + 1e-4);
  CHECK(std::fabs(acc_s - var_full) < 5.0 * var_full * std::sqrt(2.0 / n_paths) + 1e-4);
}
