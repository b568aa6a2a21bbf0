#include "levylab/sde/solver.hpp"

#include <algorithm>
#include <cmath>

namespace levylab {
namespace {

// Solver nodes: indices into the forcing grid at {s + l dt} plus every jump
// node of M in (s, T]. Throws if dt does not land on the grid.
std::vector<std::size_t> solver_nodes(const CadlagPath& m, double s, double dt) {
  std::vector<double> times;
  double horizon = m.horizon();
  long steps = std::lround((horizon - s) / dt);
  for (long l = 0; l <= steps; ++l) times.push_back(std::min(s + l * dt, horizon));
  if (times.back() < horizon - 1e-12) times.push_back(horizon);
  for (const PathJump& j : m.jumps()) {
    if (j.time > s + 1e-12) times.push_back(j.time);
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end(),
                          [](double a, double b) { return std::fabs(a - b) <= 1e-12; }),
              times.end());
  std::vector<std::size_t> idx;
  idx.reserve(times.size());
  for (double t : times) idx.push_back(m.index_of(t));
  return idx;
}

// full-range grid: the solver times prefixed by pre-start nodes carrying x
std::vector<double> extended_times(const CadlagPath& m, const std::vector<std::size_t>& nodes,
                                   double s, double dt) {
  std::vector<double> pre;
  for (double t = s - dt; t > 1e-12; t -= dt) pre.push_back(t);
  pre.push_back(0.0);
  std::sort(pre.begin(), pre.end());
  std::vector<double> out;
  if (s > 1e-12) {
    out = pre;
  }
  for (std::size_t i : nodes) out.push_back(m.time(i));
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return std::fabs(a - b) <= 1e-12; }),
            out.end());
  return out;
}

struct Assembled {
  std::vector<double> times;        // full [0,T]
  std::size_t start_offset;         // index of s in times
  std::vector<std::size_t> m_idx;   // forcing-grid index per solver node
};

Assembled assemble(const CadlagPath& m, double s, double dt) {
  Assembled a;
  a.m_idx = solver_nodes(m, s, dt);
  a.times = extended_times(m, a.m_idx, s, dt);
  a.start_offset = a.times.size() - a.m_idx.size();
  return a;
}

SolutionPath pack_solution(const Assembled& grid, const CadlagPath& m, int n, double s,
                           const Vector& x, std::vector<double> vals_from_s, bool with_jumps,
                           SolveInfo info) {
  std::vector<double> values(grid.times.size() * n);
  for (std::size_t i = 0; i < grid.start_offset; ++i) {
    for (int c = 0; c < n; ++c) values[i * n + c] = x[c];
  }
  std::copy(vals_from_s.begin(), vals_from_s.end(), values.begin() + grid.start_offset * n);
  std::vector<PathJump> jumps;
  if (with_jumps) {
    for (const PathJump& j : m.jumps()) {
      if (j.time > s + 1e-12) jumps.push_back(j);
    }
  }
  SolutionPath out;
  out.s = s;
  out.x0 = x;
  out.path = CadlagPath(n, grid.times, std::move(values), std::move(jumps));
  out.info = std::move(info);
  return out;
}

// shared Picard driver over an assembled grid; the integrand value at node j
// depends on (t_j, state_j) and the integral map uses trapezoid cells with
// left limits at jump nodes
template <class NodeRhs, class LeftRhs>
std::vector<double> picard_iterate(const Assembled& grid, const CadlagPath& m, int n,
                                   const Vector& x, const PicardOptions& po, NodeRhs&& rhs,
                                   LeftRhs&& rhs_left, const double* m_offset, SolveInfo& info) {
  const std::size_t nn = grid.m_idx.size();
  std::vector<double> g(nn * n), g_new(nn * n), f(nn * n), f_left(nn * n);
  for (std::size_t j = 0; j < nn; ++j) {
    for (int c = 0; c < n; ++c) {
      g[j * n + c] = po.initial.size() == n ? po.initial[c] : x[c];
    }
  }
  // force the anchored start value
  for (int c = 0; c < n; ++c) g[c] = x[c];

  std::vector<double> history;
  double best = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < po.max_iters; ++it) {
    // node and left-limit integrand values
    for (std::size_t j = 0; j < nn; ++j) {
      rhs(j, &g[j * n], &f[j * n]);
      rhs_left(j, &g[j * n], &f_left[j * n]);
    }
    // trapezoid prefix integral
    double resid = 0;
    std::vector<double> q(n, 0.0);
    for (std::size_t j = 0; j < nn; ++j) {
      if (j > 0) {
        double h = m.time(grid.m_idx[j]) - m.time(grid.m_idx[j - 1]);
        for (int c = 0; c < n; ++c) {
          q[c] += 0.5 * h * (f[(j - 1) * n + c] + f_left[j * n + c]);
        }
      }
      for (int c = 0; c < n; ++c) {
        double target = x[c] + q[c] + (m_offset ? m_offset[j * n + c] : 0.0);
        g_new[j * n + c] = target;
        resid = std::max(resid, std::fabs(target - g[j * n + c]));
      }
    }
    history.push_back(resid);
    best = std::min(best, resid);
    if (resid <= po.tol) {
      for (std::size_t i = 0; i < g.size(); ++i) g[i] = g_new[i];
      info.iterations = it + 1;
      info.residual = resid;
      info.converged = true;
      return g;
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
      g[i] = (1.0 - po.damping) * g[i] + po.damping * g_new[i];
    }
  }
  info.iterations = it;
  info.residual = history.back();
  if (history.back() > history.front() && history.back() > 10.0 * best) {
    throw PicardError("Picard iteration diverged (residual " + std::to_string(history.back()) +
                          " after " + std::to_string(it) + " iterations)",
                      std::move(history));
  }
  info.converged = false;  // ran out of iterations while still improving
  return g;
}

}  // namespace

void SdeProblem::validate() const {
  if (n <= 0 || d <= 0 || d > n) throw std::invalid_argument("SdeProblem: need 1 <= d <= n");
  if (a.rows() != n || a.cols() != n) throw std::invalid_argument("SdeProblem: A must be n x n");
  if (sigma.rows() != n || sigma.cols() != d) {
    throw std::invalid_argument("SdeProblem: sigma must be n x d");
  }
  if (drift.n() != n) throw std::invalid_argument("SdeProblem: drift dimension mismatch");
  if (!(horizon > 0)) throw std::invalid_argument("SdeProblem: horizon must be positive");
}

SolutionPath solve_strong(const SdeProblem& problem, const SampledLevyPath& driver, double s,
                          const Vector& x, const SolveOptions& opts) {
  problem.validate();
  IntegralDecomposition m = stochastic_integral(problem.sigma, driver);
  return solve_strong_on(problem, m.total, s, x, opts);
}

SolutionPath solve_strong_on(const SdeProblem& problem, const CadlagPath& m, double s,
                             const Vector& x, const SolveOptions& opts) {
  const int n = problem.n;
  if (x.size() != n) throw std::invalid_argument("solve_strong: x dimension mismatch");
  Assembled grid = assemble(m, s, opts.dt);
  const std::size_t nn = grid.m_idx.size();
  SolveInfo info{opts.scheme == Scheme::euler ? "euler" : "picard", opts.dt, 0, 0.0, true};

  std::vector<double> vals(nn * n);
  if (opts.scheme == Scheme::euler) {
    Vector z = x;
    Vector b(n);
    for (int c = 0; c < n; ++c) vals[c] = z[c];
    for (std::size_t j = 0; j + 1 < nn; ++j) {
      double t0 = m.time(grid.m_idx[j]);
      double t1 = m.time(grid.m_idx[j + 1]);
      double h = t1 - t0;
      b = problem.drift.eval_vec(t0, z);
      z += h * (b + problem.a * z);
      std::span<const double> m0 = m.value(grid.m_idx[j]);
      std::span<const double> m1 = m.value(grid.m_idx[j + 1]);
      for (int c = 0; c < n; ++c) z[c] += m1[c] - m0[c];
      for (int c = 0; c < n; ++c) vals[(j + 1) * n + c] = z[c];
    }
  } else {
    // forcing offset per node: M(t_j) - M(s)
    std::vector<double> m_offset(nn * n);
    std::span<const double> ms = m.value(grid.m_idx[0]);
    for (std::size_t j = 0; j < nn; ++j) {
      std::span<const double> mj = m.value(grid.m_idx[j]);
      for (int c = 0; c < n; ++c) m_offset[j * n + c] = mj[c] - ms[c];
    }
    Vector state(n), out(n);
    auto rhs = [&](std::size_t j, const double* gj, double* fj) {
      double t = m.time(grid.m_idx[j]);
      for (int c = 0; c < n; ++c) state[c] = gj[c];
      out = problem.drift.eval_vec(t, state) + problem.a * state;
      for (int c = 0; c < n; ++c) fj[c] = out[c];
    };
    Vector state_l(n), out_l(n);
    auto rhs_left = [&](std::size_t j, const double* gj, double* fj) {
      // left limit of the solution at a jump node: value minus the M jump
      double t = m.time(grid.m_idx[j]);
      for (int c = 0; c < n; ++c) state_l[c] = gj[c];
      if (const PathJump* jp = m.jump_at_node(grid.m_idx[j])) {
        for (int c = 0; c < n; ++c) state_l[c] -= jp->delta[c];
      }
      out_l = problem.drift.eval_vec(t, state_l) + problem.a * state_l;
      for (int c = 0; c < n; ++c) fj[c] = out_l[c];
    };
    vals = picard_iterate(grid, m, n, x, opts.picard, rhs, rhs_left, m_offset.data(), info);
  }
  return pack_solution(grid, m, n, s, x, std::move(vals), /*with_jumps=*/true, std::move(info));
}

SolutionPath solve_integral_equation(const TildeDrift& tilde_drift, int n, const CadlagPath& m,
                                     double s0, const Vector& x, const SolveOptions& opts) {
  if (x.size() != n) throw std::invalid_argument("solve_integral_equation: x dim mismatch");
  if (m.dim() != n) throw std::invalid_argument("solve_integral_equation: M dim mismatch");
  Assembled grid = assemble(m, s0, opts.dt);
  const std::size_t nn = grid.m_idx.size();
  SolveInfo info{opts.scheme == Scheme::euler ? "euler" : "picard", opts.dt, 0, 0.0, true};

  std::vector<double> vals(nn * n);
  std::vector<double> y(n), f(n);
  if (opts.scheme == Scheme::euler) {
    std::vector<double> g(x.data(), x.data() + n);
    for (int c = 0; c < n; ++c) vals[c] = g[c];
    for (std::size_t j = 0; j + 1 < nn; ++j) {
      double t0 = m.time(grid.m_idx[j]);
      double h = m.time(grid.m_idx[j + 1]) - t0;
      std::span<const double> mj = m.value(grid.m_idx[j]);
      for (int c = 0; c < n; ++c) y[c] = g[c] + mj[c];
      tilde_drift(t0, y, f);
      for (int c = 0; c < n; ++c) g[c] += h * f[c];
      for (int c = 0; c < n; ++c) vals[(j + 1) * n + c] = g[c];
    }
  } else {
    auto rhs = [&](std::size_t j, const double* gj, double* fj) {
      double t = m.time(grid.m_idx[j]);
      std::span<const double> mj = m.value(grid.m_idx[j]);
      for (int c = 0; c < n; ++c) y[c] = gj[c] + mj[c];
      std::span<double> fv(fj, static_cast<std::size_t>(n));
      tilde_drift(t, y, fv);
    };
    std::vector<double> y_l(n);
    auto rhs_left = [&](std::size_t j, const double* gj, double* fj) {
      // g is continuous; the left limit enters through M only
      double t = m.time(grid.m_idx[j]);
      std::vector<double> ml = m.left_limit(grid.m_idx[j]);
      for (int c = 0; c < n; ++c) y_l[c] = gj[c] + ml[c];
      std::span<double> fv(fj, static_cast<std::size_t>(n));
      tilde_drift(t, y_l, fv);
    };
    vals = picard_iterate(grid, m, n, x, opts.picard, rhs, rhs_left, nullptr, info);
  }
  return pack_solution(grid, m, n, s0, x, std::move(vals), /*with_jumps=*/false, std::move(info));
}

TildeDrift drift_plus_linear(const SdeProblem& problem) {
  Matrix a = problem.a;
  HolderField drift = problem.drift;
  int n = problem.n;
  return [a, drift, n](double r, std::span<const double> y, std::span<double> out) {
    drift.eval(r, y, out);
    for (int i = 0; i < n; ++i) {
      double acc = 0;
      for (int j = 0; j < n; ++j) acc += a(i, j) * y[j];
      out[i] += acc;
    }
  };
}

SolutionPath shift_solution(const SdeProblem& problem, const SampledLevyPath& driver, double s,
                            const Vector& x, const SolveOptions& opts) {
  problem.validate();
  if (problem.drift.time_dependent()) {
    throw std::invalid_argument(
        "shift_solution: the time-shift construction requires an autonomous drift b(x); "
        "time-dependent drift would change law under shifting");
  }
  if (problem.sigma.name() != "constant") {
    throw std::invalid_argument(
        "shift_solution: constant sigma required (shifted driver has the same triplet only "
        "for constant integrands)");
  }
  SampledLevyPath shifted = shift_driver(driver, s);
  SdeProblem sub = problem;
  sub.horizon = problem.horizon - s;
  SolutionPath base = solve_strong(sub, shifted, 0.0, x, opts);

  // re-index to [s, T] and extend by x on [0, s)
  const int n = problem.n;
  std::vector<double> times;
  for (double t = s - opts.dt; t > 1e-12; t -= opts.dt) times.push_back(t);
  times.push_back(0.0);
  std::sort(times.begin(), times.end());
  std::size_t pre = times.size();
  for (std::size_t i = 0; i < base.path.nodes(); ++i) times.push_back(base.path.time(i) + s);
  std::vector<double> values(times.size() * n);
  for (std::size_t i = 0; i < pre; ++i) {
    for (int c = 0; c < n; ++c) values[i * n + c] = x[c];
  }
  for (std::size_t i = 0; i < base.path.nodes(); ++i) {
    std::span<const double> v = base.path.value(i);
    for (int c = 0; c < n; ++c) values[(pre + i) * n + c] = v[c];
  }
  std::vector<PathJump> jumps;
  for (const PathJump& j : base.path.jumps()) jumps.push_back({j.time + s, j.delta});
  SolutionPath out;
  out.s = s;
  out.x0 = x;
  out.path = CadlagPath(n, std::move(times), std::move(values), std::move(jumps));
  out.info = base.info;
  return out;
}

double sup_distance_on_common(const CadlagPath& a, const CadlagPath& b, double from_time) {
  const CadlagPath& coarse = a.nodes() <= b.nodes() ? a : b;
  const CadlagPath& fine = a.nodes() <= b.nodes() ? b : a;
  double worst = 0;
  std::size_t hint = 0;
  for (std::size_t i = 0; i < coarse.nodes(); ++i) {
    double t = coarse.time(i);
    if (t < from_time - 1e-12) continue;
    // advance in the fine grid; skip coarse nodes absent from it
    while (hint < fine.nodes() && fine.time(hint) < t - 1e-9) ++hint;
    if (hint >= fine.nodes()) break;
    if (std::fabs(fine.time(hint) - t) > 1e-9) continue;
    std::span<const double> va = coarse.value(i);
    std::span<const double> vb = fine.value(hint);
    for (int c = 0; c < coarse.dim(); ++c) worst = std::max(worst, std::fabs(va[c] - vb[c]));
  }
  return worst;
}

double estimate_scheme_error(const SdeProblem& problem, const SampledLevyPath& driver, double s,
                             const Vector& x, double dt) {
  SolveOptions coarse{Scheme::euler, dt, {}};
  SolveOptions fine{Scheme::euler, dt / 4.0, {}};
  SolutionPath za = solve_strong(problem, driver, s, x, coarse);
  SolutionPath zb = solve_strong(problem, driver, s, x, fine);
  return sup_distance_on_common(za.path, zb.path, s);
}

}  // namespace levylab
