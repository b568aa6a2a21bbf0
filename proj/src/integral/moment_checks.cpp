#include "levylab/integral/moment_checks.hpp"

#include <cmath>
#include <stdexcept>

#include "levylab/parallel.hpp"
#include "levylab/stats.hpp"

namespace levylab {
namespace {

double norm_of_increment(const CadlagPath& p, std::size_t i0, std::size_t i1) {
  double s = 0;
  std::span<const double> a = p.value(i0), b = p.value(i1);
  for (int c = 0; c < p.dim(); ++c) s += (b[c] - a[c]) * (b[c] - a[c]);
  return std::sqrt(s);
}

}  // namespace

std::vector<TimePair> dyadic_pairs(int k_lo, int k_hi, double base) {
  std::vector<TimePair> out;
  for (int k = k_lo; k <= k_hi; ++k) out.push_back({base, base + std::ldexp(1.0, -k)});
  return out;
}

MomentReport moment_estimates_check(const GeneratingTriplet& triplet, const MatrixIntegrand& sigma,
                                    const std::vector<TimePair>& pairs, std::uint64_t master_seed,
                                    const MomentCheckConfig& cfg) {
  ThetaMoment tm = theta_moment(triplet, cfg.theta);
  if (!tm.finite) {
    throw std::invalid_argument(
        "moment_estimates_check: E|L_1|^theta is infinite for theta = " +
        std::to_string(cfg.theta) + "; the K-moment estimate does not apply");
  }

  const std::size_t np = static_cast<std::size_t>(cfg.n_paths);
  const std::size_t npairs = pairs.size();
  // per path, per pair: |dI|^2, |dJ|^2, |dK|^theta
  std::vector<double> acc_small(np * npairs), acc_gauss(np * npairs), acc_large(np * npairs);

  parallel_for(np, cfg.threads, [&](std::size_t p) {
    SampledLevyPath driver = sample_levy_path(triplet, cfg.horizon, cfg.n_steps,
                                              derive_path_seed(master_seed, p), cfg.sampler);
    IntegralDecomposition m = stochastic_integral(sigma, driver);
    for (std::size_t q = 0; q < npairs; ++q) {
      std::size_t i0 = m.total.index_of(pairs[q].s);
      std::size_t i1 = m.total.index_of(pairs[q].t);
      double di = norm_of_increment(m.small, i0, i1);
      double dj = norm_of_increment(m.gauss, i0, i1);
      double dk = norm_of_increment(m.large, i0, i1);
      acc_small[p * npairs + q] = di * di;
      acc_gauss[p * npairs + q] = dj * dj;
      acc_large[p * npairs + q] = dk == 0.0 ? 0.0 : std::pow(dk, cfg.theta);
    }
  });

  MomentReport rep;
  rep.theta = cfg.theta;
  rep.trend_threshold = cfg.trend_threshold;
  std::vector<double> inv_gap, r_small, r_gauss, r_large;
  std::vector<double> buf(np);
  for (std::size_t q = 0; q < npairs; ++q) {
    MomentRow row;
    row.s = pairs[q].s;
    row.t = pairs[q].t;
    row.gap = pairs[q].gap();
    for (std::size_t p = 0; p < np; ++p) buf[p] = acc_small[p * npairs + q];
    row.mom_small = stats::mean_se(buf).mean;
    for (std::size_t p = 0; p < np; ++p) buf[p] = acc_gauss[p * npairs + q];
    stats::MeanSe g = stats::mean_se(buf);
    row.mom_gauss = g.mean;
    row.se_gauss_ratio = g.se / row.gap;
    for (std::size_t p = 0; p < np; ++p) buf[p] = acc_large[p * npairs + q];
    row.mom_large = stats::mean_se(buf).mean;
    row.ratio_small = row.mom_small / row.gap;
    row.ratio_gauss = row.mom_gauss / row.gap;
    row.ratio_large = row.mom_large / row.gap;
    rep.rows.push_back(row);

    inv_gap.push_back(1.0 / row.gap);
    r_small.push_back(row.ratio_small);
    r_gauss.push_back(row.ratio_gauss);
    r_large.push_back(row.ratio_large);
    rep.max_ratio_small = std::max(rep.max_ratio_small, row.ratio_small);
    rep.max_ratio_gauss = std::max(rep.max_ratio_gauss, row.ratio_gauss);
    rep.max_ratio_large = std::max(rep.max_ratio_large, row.ratio_large);
  }

  // a component that is identically zero has no trend
  auto trend = [&](const std::vector<double>& r, double maxr) {
    if (maxr <= 0.0) return 0.0;
    return stats::spearman(r, inv_gap);
  };
  rep.trend_small = trend(r_small, rep.max_ratio_small);
  rep.trend_gauss = trend(r_gauss, rep.max_ratio_gauss);
  rep.trend_large = trend(r_large, rep.max_ratio_large);
  rep.pass = rep.trend_small <= cfg.trend_threshold && rep.trend_gauss <= cfg.trend_threshold &&
             rep.trend_large <= cfg.trend_threshold;
  return rep;
}

TailReport tail_bound_check(const GeneratingTriplet& triplet, const Matrix& a,
                            const MatrixIntegrand& sigma, const std::vector<TimePair>& pairs,
                            std::uint64_t master_seed, const TailCheckConfig& cfg) {
  if (pairs.empty()) throw std::invalid_argument("tail_bound_check: no pairs");
  const std::size_t np = static_cast<std::size_t>(cfg.n_paths);
  const std::size_t npairs = pairs.size();
  std::vector<double> exceed(np * npairs, 0.0);

  parallel_for(np, cfg.threads, [&](std::size_t p) {
    SampledLevyPath driver = sample_levy_path(triplet, cfg.horizon, cfg.n_steps,
                                              derive_path_seed(master_seed, p), cfg.sampler);
    IntegralDecomposition m = modified_integral(a, sigma, driver);
    for (std::size_t q = 0; q < npairs; ++q) {
      std::size_t i0 = m.total.index_of(pairs[q].s);
      std::size_t i1 = m.total.index_of(pairs[q].t);
      double diff = norm_of_increment(m.total, i0, i1);
      double threshold = std::pow(pairs[q].gap(), 0.125);
      exceed[p * npairs + q] = diff > threshold ? 1.0 : 0.0;
    }
  });

  TailReport rep;
  rep.theta = cfg.theta;
  auto shape = [&](double gap) {
    return std::pow(gap, 0.75) + std::pow(gap, 1.0 - cfg.theta / 8.0);
  };

  // order rows coarsest first
  std::vector<std::size_t> order(npairs);
  for (std::size_t q = 0; q < npairs; ++q) order[q] = q;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return pairs[x].gap() > pairs[y].gap();
  });

  bool pass = true;
  for (std::size_t rank = 0; rank < npairs; ++rank) {
    std::size_t q = order[rank];
    double p_hat = 0;
    for (std::size_t p = 0; p < np; ++p) p_hat += exceed[p * npairs + q];
    p_hat /= double(np);
    TailRow row;
    row.r = pairs[q].s;  // note: TimePair members are (s,t); keep (r,s) naming in the row
    row.s = pairs[q].t;
    row.gap = pairs[q].gap();
    row.threshold = std::pow(row.gap, 0.125);
    row.p_hat = p_hat;
    if (rank == 0) {
      // fit on the coarsest pair, floor at a few counts to avoid a degenerate fit
      rep.c3 = std::max(p_hat, 3.0 / double(np)) / shape(row.gap);
    }
    row.envelope = rep.c3 * shape(row.gap);
    if (rank > 0 && p_hat > row.envelope) pass = false;
    rep.rows.push_back(row);
  }
  rep.pass = pass;
  return rep;
}

}  // namespace levylab
