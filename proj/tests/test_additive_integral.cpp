// Decomposed stochastic integrals: exact trivial cases, hand-evaluated jump
// sums, the Ito isometry oracle, pathwise linearity/additivity, jump
// matching, moment scaling, and the tail envelope.

#include <cmath>

#include "doctest.h"
#include "levylab/integral/moment_checks.hpp"
#include "levylab/stats.hpp"
#include "test_util.hpp"

using namespace levylab;
using namespace levylab::testutil;

namespace {

GeneratingTriplet brownian1() { return GeneratingTriplet::brownian(1); }

}  // namespace

TEST_CASE("identity integrand reproduces the driver") {
  LevyMeasure m;
  m.components.push_back(CompoundPoissonComp{2.0, UniformJump{-1.5, 1.5}});
  GeneratingTriplet t(1, Matrix::Identity(1, 1), m);
  SampledLevyPath driver = sample_levy_path(t, 1.0, 128, 42);
  IntegralDecomposition dec =
      stochastic_integral(MatrixIntegrand::constant(Matrix::Identity(1, 1)), driver);
  dec.validate();
  for (std::size_t i = 0; i < driver.total.nodes(); ++i) {
    CHECK(std::fabs(dec.total.value(i)[0] - driver.total.value(i)[0]) < 1e-12);
  }
}

TEST_CASE("zero integrand gives the zero path") {
  SampledLevyPath driver = sample_levy_path(brownian1(), 1.0, 64, 7);
  IntegralDecomposition dec =
      stochastic_integral(MatrixIntegrand::constant(Matrix::Zero(1, 1)), driver);
  for (std::size_t i = 0; i < dec.total.nodes(); ++i) CHECK(dec.total.value(i)[0] == 0.0);
  CHECK(dec.total.jumps().empty());
}

TEST_CASE("time-weighted jump sum, hand evaluated") {
  // sigma(t) = t, single unit jump at 0.5: K(t) = 0.5 * 1_{t >= 0.5}
  SampledLevyPath driver = manual_jump_driver(1, 1.0, 10, {{0.5, {1.0}}});
  MatrixIntegrand sigma = MatrixIntegrand::custom(
      1, 1, [](double t) { return Matrix::Constant(1, 1, t); }, "ramp");
  IntegralDecomposition dec = stochastic_integral(sigma, driver);
  for (std::size_t i = 0; i < dec.total.nodes(); ++i) {
    double expected = dec.total.time(i) >= 0.5 ? 0.5 : 0.0;
    CHECK(dec.large.value(i)[0] == doctest::Approx(expected).epsilon(1e-14));
    CHECK(dec.total.value(i)[0] == doctest::Approx(expected).epsilon(1e-14));
  }
  REQUIRE(dec.total.jumps().size() == 1);
  CHECK(dec.total.jumps()[0].delta[0] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("modified integral with A = 0 equals the plain integral") {
  SampledLevyPath driver = sample_levy_path(brownian1(), 1.0, 64, 9);
  MatrixIntegrand sigma = MatrixIntegrand::constant(Matrix::Constant(1, 1, 0.7));
  IntegralDecomposition plain = stochastic_integral(sigma, driver);
  IntegralDecomposition mod = modified_integral(Matrix::Zero(1, 1), sigma, driver);
  CHECK(plain.total.values_flat() == mod.total.values_flat());
}

TEST_CASE("kinetic e^{-rA} C has the nilpotent closed form (-rI; I)") {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 1) = 1.0;
  Matrix c = Matrix::Zero(2, 1);
  c(1, 0) = 1.0;
  MatrixIntegrand mod = MatrixIntegrand::modified_by(a, MatrixIntegrand::constant(c));
  for (double r : {0.0, 0.3, 1.0}) {
    Matrix m = mod.eval(r);
    CHECK(m(0, 0) == doctest::Approx(-r).epsilon(1e-14));
    CHECK(m(1, 0) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("Ito isometry: Var of the modified Brownian integral") {
  // n=d=1, A=(1), sigma=1: Var(Mtilde_t) = (1 - e^{-2t})/2
  Matrix a = Matrix::Constant(1, 1, 1.0);
  MatrixIntegrand sigma = MatrixIntegrand::constant(Matrix::Identity(1, 1));
  const int n_paths = 8000;
  std::vector<double> v_half(n_paths), v_one(n_paths);
  for (int p = 0; p < n_paths; ++p) {
    SampledLevyPath driver = sample_levy_path(brownian1(), 1.0, 512, derive_path_seed(606, p));
    IntegralDecomposition dec = modified_integral(a, sigma, driver);
    v_half[p] = dec.total.value(dec.total.index_of(0.5))[0];
    v_one[p] = dec.total.value(dec.total.nodes() - 1)[0];
  }
  for (auto [t, vals] : {std::pair{0.5, &v_half}, std::pair{1.0, &v_one}}) {
    double expected = (1.0 - std::exp(-2.0 * t)) / 2.0;
    double mean = 0, var = 0;
    for (double v : *vals) mean += v;
    mean /= n_paths;
    for (double v : *vals) var += (v - mean) * (v - mean);
    var /= n_paths - 1;
    double se = expected * std::sqrt(2.0 / n_paths);
    CHECK(std::fabs(var - expected) < 3.0 * se + 2.0 / 512.0);  // MC noise + O(dt) bias
  }
}

TEST_CASE("linearity in sigma, pathwise") {
  LevyMeasure m;
  m.components.push_back(CompoundPoissonComp{1.0, PointMassJump{Vector::Constant(1, 2.0)}});
  GeneratingTriplet t(1, Matrix::Identity(1, 1), m);
  SampledLevyPath driver = sample_levy_path(t, 1.0, 64, 11);

  MatrixIntegrand s1 = MatrixIntegrand::constant(Matrix::Constant(1, 1, 0.8));
  MatrixIntegrand s2 = MatrixIntegrand::custom(
      1, 1, [](double u) { return Matrix::Constant(1, 1, std::sin(u)); }, "sin");
  double alpha = 2.0, beta = -0.5;
  MatrixIntegrand combo = MatrixIntegrand::custom(
      1, 1,
      [=](double u) {
        return Matrix(alpha * s1.eval(u) + beta * s2.eval(u));
      },
      "combo");
  IntegralDecomposition d1 = stochastic_integral(s1, driver);
  IntegralDecomposition d2 = stochastic_integral(s2, driver);
  IntegralDecomposition dc = stochastic_integral(combo, driver);
  for (std::size_t i = 0; i < dc.total.nodes(); ++i) {
    double expect = alpha * d1.total.value(i)[0] + beta * d2.total.value(i)[0];
    CHECK(std::fabs(dc.total.value(i)[0] - expect) < 1e-12);
  }
}

TEST_CASE("additivity: increments depend only on driver increments") {
  GeneratingTriplet t = brownian1();
  SampledLevyPath driver = sample_levy_path(t, 1.0, 128, 13);
  MatrixIntegrand sigma = MatrixIntegrand::constant(Matrix::Constant(1, 1, 1.3));
  IntegralDecomposition full = stochastic_integral(sigma, driver);

  double s = 0.25;
  SampledLevyPath shifted = shift_driver(driver, s);
  IntegralDecomposition sub = stochastic_integral(sigma, shifted);
  std::size_t i_s = full.total.index_of(s);
  for (std::size_t i = 0; i < sub.total.nodes(); ++i) {
    double expect = full.total.value(i_s + i)[0] - full.total.value(i_s)[0];
    CHECK(std::fabs(sub.total.value(i)[0] - expect) < 1e-12);
  }
}

TEST_CASE("jumps of the integral are sigma(u) times driver jumps, exactly") {
  LevyMeasure m;
  m.components.push_back(CompoundPoissonComp{3.0, UniformJump{0.5, 2.0}});
  GeneratingTriplet t(1, Matrix::Zero(1, 1), m);
  SampledLevyPath driver = sample_levy_path(t, 1.0, 32, 21);
  MatrixIntegrand sigma = MatrixIntegrand::custom(
      1, 1, [](double u) { return Matrix::Constant(1, 1, std::cos(u)); }, "cos");
  IntegralDecomposition dec = stochastic_integral(sigma, driver);
  REQUIRE(dec.total.jumps().size() == driver.total.jumps().size());
  for (std::size_t j = 0; j < dec.total.jumps().size(); ++j) {
    const PathJump& dj = driver.total.jumps()[j];
    const PathJump& ij = dec.total.jumps()[j];
    CHECK(ij.time == dj.time);
    CHECK(ij.delta[0] == std::cos(dj.time) * dj.delta[0]);
  }
}

TEST_CASE("moment scaling: Brownian case is exactly linear in the gap") {
  GeneratingTriplet t = GeneratingTriplet::brownian(2);
  MatrixIntegrand sigma = MatrixIntegrand::constant(Matrix::Identity(2, 2));
  MomentCheckConfig cfg;
  cfg.n_paths = 3000;
  cfg.n_steps = 1024;
  cfg.threads = 2;
  MomentReport rep = moment_estimates_check(t, sigma, dyadic_pairs(2, 8), 515, cfg);
  CHECK(rep.pass);
  for (const MomentRow& row : rep.rows) {
    // E|J_t - J_s|^2 / |t-s| = d exactly; allow 3 SE
    CHECK(std::fabs(row.ratio_gauss - 2.0) <= 3.0 * row.se_gauss_ratio);
    CHECK(row.ratio_small == 0.0);
    CHECK(row.ratio_large == 0.0);
  }
}

TEST_CASE("moment scaling: zero covariance gives zero ratios") {
  GeneratingTriplet t = GeneratingTriplet::deterministic_zero(1);
  MatrixIntegrand sigma = MatrixIntegrand::constant(Matrix::Identity(1, 1));
  MomentCheckConfig cfg;
  cfg.n_paths = 50;
  cfg.n_steps = 1024;
  MomentReport rep = moment_estimates_check(t, sigma, dyadic_pairs(2, 6), 1, cfg);
  CHECK(rep.pass);
  for (const MomentRow& row : rep.rows) {
    CHECK(row.ratio_gauss == 0.0);
    CHECK(row.ratio_small == 0.0);
    CHECK(row.ratio_large == 0.0);
  }
}

TEST_CASE("moment scaling: single-jump dominance bounds the K ratio") {
  // lambda = 1, jumps = +2, theta = 0.5: for small gaps
  // E|K_t-K_s|^theta / gap <= lambda 2^theta (1 + slack)
  LevyMeasure m;
  m.components.push_back(CompoundPoissonComp{1.0, PointMassJump{Vector::Constant(1, 2.0)}});
  GeneratingTriplet t(1, Matrix::Zero(1, 1), m);
  MatrixIntegrand sigma = MatrixIntegrand::constant(Matrix::Identity(1, 1));
  MomentCheckConfig cfg;
  cfg.n_paths = 20000;
  cfg.n_steps = 1024;
  cfg.threads = 2;
  cfg.theta = 0.5;
  MomentReport rep = moment_estimates_check(t, sigma, dyadic_pairs(4, 9), 99, cfg);
  double bound = 1.0 * std::pow(2.0, 0.5);
  for (const MomentRow& row : rep.rows) {
    CHECK(row.ratio_large <= bound * 1.15);
  }
  CHECK(rep.pass);
}

TEST_CASE("moment check refuses an infinite theta moment") {
  LevyMeasure m;
  m.components.push_back(CompoundPoissonComp{1.0, ParetoJump{0.3}});
  GeneratingTriplet t(1, Matrix::Zero(1, 1), m);
  MatrixIntegrand sigma = MatrixIntegrand::constant(Matrix::Identity(1, 1));
  MomentCheckConfig cfg;
  cfg.theta = 0.5;
  CHECK_THROWS_AS(
      moment_estimates_check(t, sigma, dyadic_pairs(2, 4), 1, cfg), std::invalid_argument);
}

TEST_CASE("grid coarsening error of the Gaussian integral vanishes with slope >= 0.4") {
  // time-varying sigma so the coarse left-point sums differ from the fine ones
  Matrix a = Matrix::Constant(1, 1, 1.0);
  MatrixIntegrand sigma =
      MatrixIntegrand::matexp_factor(a, Matrix::Identity(1, 1));  // e^{-t} scalar
  const int fine_steps = 1024;
  std::vector<double> hs, errs;
  for (int m : {32, 16, 8, 4}) {
    double acc = 0;
    const int seeds = 40;
    for (int sd = 0; sd < seeds; ++sd) {
      SampledLevyPath fine = sample_levy_path(brownian1(), 1.0, fine_steps,
                                              derive_path_seed(777, sd));
      SampledLevyPath coarse = coarsen_driver(fine, fine_steps, m);
      IntegralDecomposition df = stochastic_integral(sigma, fine);
      IntegralDecomposition dc = stochastic_integral(sigma, coarse);
      // compare at the coarse nodes
      double worst = 0;
      for (std::size_t i = 0; i < dc.total.nodes(); ++i) {
        std::size_t fi = df.total.index_of(dc.total.time(i));
        worst = std::max(worst, std::fabs(dc.total.value(i)[0] - df.total.value(fi)[0]));
      }
      acc += worst * worst;
    }
    hs.push_back(double(m) / fine_steps);
    errs.push_back(std::sqrt(acc / seeds));
  }
  double slope = stats::loglog_slope(hs, errs);
  MESSAGE("coarsening RMS slope = ", slope);
  CHECK(slope >= 0.4);
}

TEST_CASE("tail envelope: deterministic zero driver never exceeds") {
  GeneratingTriplet t = GeneratingTriplet::deterministic_zero(1);
  TailCheckConfig cfg;
  cfg.n_paths = 100;
  cfg.n_steps = 256;
  TailReport rep = tail_bound_check(t, Matrix::Zero(1, 1),
                                    MatrixIntegrand::constant(Matrix::Identity(1, 1)),
                                    dyadic_pairs(2, 6), 3, cfg);
  CHECK(rep.pass);
  for (const TailRow& row : rep.rows) CHECK(row.p_hat == 0.0);
}

TEST_CASE("tail envelope: Brownian case matches the Gaussian oracle and passes") {
  GeneratingTriplet t = brownian1();
  TailCheckConfig cfg;
  cfg.n_paths = 20000;
  cfg.n_steps = 256;
  cfg.threads = 2;
  cfg.theta = 0.5;
  TailReport rep = tail_bound_check(t, Matrix::Zero(1, 1),
                                    MatrixIntegrand::constant(Matrix::Identity(1, 1)),
                                    dyadic_pairs(2, 6), 44, cfg);
  CHECK(rep.pass);
  double prev = 1.0;
  for (const TailRow& row : rep.rows) {
    // P(|N(0,gap)| > gap^{1/8}) = 2 Phibar(gap^{1/8 - 1/2})
    double oracle = 2.0 * stats::normal_tail(std::pow(row.gap, 0.125 - 0.5));
    double se = std::sqrt(oracle * (1.0 - oracle) / cfg.n_paths);
    CHECK(std::fabs(row.p_hat - oracle) <= 4.0 * se + 1e-4);
    CHECK(row.p_hat <= prev + 3.0 * se);  // decreasing towards fine gaps
    prev = row.p_hat;
  }
}
