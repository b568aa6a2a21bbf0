#include "levylab/levy/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace levylab {
namespace {

// fixed stream layout per path seed
constexpr std::uint64_t kGaussStream = 0;
constexpr std::uint64_t kSurrogateStream = 1;
constexpr std::uint64_t kComponentBase = 16;
constexpr std::uint64_t kComponentStride = 8;

struct JumpEvent {
  double time;
  std::vector<double> delta;
};

int poisson_single(kernels::CounterRng& rng, double mean) {
  double limit = std::exp(-mean);
  int k = 0;
  double p = 1.0;
  do {
    p *= rng.next_uniform();
    ++k;
  } while (p > limit);
  return k - 1;
}

}  // namespace

int poisson_count(kernels::CounterRng& rng, double mean) {
  if (mean < 0) throw std::invalid_argument("poisson_count: negative mean");
  int total = 0;
  while (mean > 500.0) {
    total += poisson_single(rng, 500.0);
    mean -= 500.0;
  }
  return total + poisson_single(rng, mean);
}

std::uint64_t derive_path_seed(std::uint64_t master, std::uint64_t path_index) {
  return kernels::mix_seed(master, path_index);
}

SampledLevyPath sample_levy_path(const GeneratingTriplet& triplet, double horizon, int n_steps,
                                 std::uint64_t seed, const SamplerOptions& opts) {
  if (n_steps < 1) throw std::invalid_argument("sample_levy_path: n_steps must be >= 1");
  if (!(horizon > 0)) throw std::invalid_argument("sample_levy_path: horizon must be positive");
  const int d = triplet.dim();
  const kernels::Kernels& K = kernels::active();

  std::vector<JumpEvent> small_events, large_events;
  Vector compensator_rate = Vector::Zero(d);
  double surrogate_rate = 0;  // variance per unit time of the dropped part

  const auto& comps = triplet.measure().components;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    std::uint64_t base = kComponentBase + kComponentStride * c;
    kernels::CounterRng count_rng(seed, base);

    if (const auto* cp = std::get_if<CompoundPoissonComp>(&comps[c])) {
      int n = poisson_count(count_rng, cp->intensity * horizon);
      std::vector<double> times(n), us(n);
      K.fill_uniform(seed, base + 1, 0, times.size(), times.data());
      K.fill_uniform(seed, base + 2, 0, us.size(), us.data());
      std::vector<double> zs;
      if (std::holds_alternative<GaussianJump>(cp->jumps)) {
        zs.resize(n);
        K.fill_normal(seed, base + 3, 0, zs.size(), zs.data());
      }
      for (int j = 0; j < n; ++j) {
        JumpEvent ev;
        ev.time = times[j] * horizon;
        if (const auto* pm = std::get_if<PointMassJump>(&cp->jumps)) {
          ev.delta = to_std(pm->value);
        } else if (const auto* g = std::get_if<GaussianJump>(&cp->jumps)) {
          ev.delta = {g->mean + g->sd * zs[j]};
        } else if (const auto* u = std::get_if<UniformJump>(&cp->jumps)) {
          ev.delta = {u->lo + (u->hi - u->lo) * us[j]};
        } else {
          const auto& p = std::get<ParetoJump>(cp->jumps);
          ev.delta = {std::pow(us[j], -1.0 / p.index)};
        }
        double norm = norm2(ev.delta);
        (norm > 1.0 ? large_events : small_events).push_back(std::move(ev));
      }
      compensator_rate += cp->intensity * jump_mean_small(cp->jumps, d);
    } else {
      const auto& st = std::get<SmallJumpStableComp>(comps[c]);
      const double eps = opts.epsilon;
      double eps_pow = std::pow(eps, -st.alpha);
      double intensity = 2.0 * st.scale * (eps_pow - 1.0) / st.alpha;
      int n = poisson_count(count_rng, intensity * horizon);
      std::vector<double> times(n), us(2 * static_cast<std::size_t>(n));
      K.fill_uniform(seed, base + 1, 0, times.size(), times.data());
      K.fill_uniform(seed, base + 2, 0, us.size(), us.data());
      for (int j = 0; j < n; ++j) {
        double r = std::pow(eps_pow - us[2 * j] * (eps_pow - 1.0), -1.0 / st.alpha);
        double sign = us[2 * j + 1] < 0.5 ? -1.0 : 1.0;
        small_events.push_back({times[j] * horizon, {sign * r}});
      }
      // compensator on (eps,1] vanishes by symmetry; dropped part is centered
      if (opts.strategy == SmallJumpStrategy::gaussian_surrogate) {
        surrogate_rate += 2.0 * st.scale * std::pow(eps, 2.0 - st.alpha) / (2.0 - st.alpha);
      }
    }
  }

  auto by_time = [](const JumpEvent& a, const JumpEvent& b) { return a.time < b.time; };
  std::sort(small_events.begin(), small_events.end(), by_time);
  std::sort(large_events.begin(), large_events.end(), by_time);

  // coalesce events closer than the grid dedupe tolerance
  auto coalesce = [d](std::vector<JumpEvent>& evs) {
    std::vector<JumpEvent> out;
    for (JumpEvent& ev : evs) {
      if (!out.empty() && std::fabs(out.back().time - ev.time) <= 1e-12) {
        for (int c = 0; c < d; ++c) out.back().delta[c] += ev.delta[c];
      } else {
        out.push_back(std::move(ev));
      }
    }
    evs = std::move(out);
  };
  coalesce(small_events);
  coalesce(large_events);

  std::vector<double> uniform_times(n_steps + 1);
  for (int i = 0; i <= n_steps; ++i) uniform_times[i] = horizon * i / n_steps;
  std::vector<double> jump_times;
  for (const auto& ev : small_events) jump_times.push_back(ev.time);
  for (const auto& ev : large_events) jump_times.push_back(ev.time);
  std::sort(jump_times.begin(), jump_times.end());
  std::vector<double> grid = merge_times(uniform_times, jump_times);

  const std::size_t nodes = grid.size();
  const std::size_t dim = static_cast<std::size_t>(d);

  // Gaussian component: increments sqrt(h) * S z per cell
  std::vector<double> gauss_vals(nodes * dim, 0.0);
  {
    std::vector<double> z((nodes - 1) * dim);
    K.fill_normal(seed, kGaussStream, 0, z.size(), z.data());
    std::vector<double> sur;
    if (surrogate_rate > 0) {
      sur.resize((nodes - 1) * dim);
      K.fill_normal(seed, kSurrogateStream, 0, sur.size(), sur.data());
    }
    const Matrix& s_factor = triplet.gauss_factor();
    Vector acc = Vector::Zero(d);
    Vector zi(d);
    double sur_sd = std::sqrt(surrogate_rate);
    for (std::size_t i = 0; i + 1 < nodes; ++i) {
      double h = grid[i + 1] - grid[i];
      double sq = std::sqrt(h);
      for (std::size_t c = 0; c < dim; ++c) zi[c] = z[i * dim + c];
      acc += sq * (s_factor * zi);
      if (surrogate_rate > 0) {
        for (std::size_t c = 0; c < dim; ++c) acc[c] += sq * sur_sd * sur[i * dim + c];
      }
      for (std::size_t c = 0; c < dim; ++c) gauss_vals[(i + 1) * dim + c] = acc[c];
    }
  }

  // small component: jump sum minus t * compensator rate
  std::vector<double> small_vals(nodes * dim, 0.0);
  {
    Vector acc = Vector::Zero(d);
    std::size_t next = 0;
    for (std::size_t i = 0; i < nodes; ++i) {
      while (next < small_events.size() && small_events[next].time <= grid[i] + 1e-12) {
        for (int c = 0; c < d; ++c) acc[c] += small_events[next].delta[c];
        ++next;
      }
      for (std::size_t c = 0; c < dim; ++c) {
        small_vals[i * dim + c] = acc[c] - grid[i] * compensator_rate[c];
      }
    }
  }

  // large component: pure jump sum
  std::vector<double> large_vals(nodes * dim, 0.0);
  {
    Vector acc = Vector::Zero(d);
    std::size_t next = 0;
    for (std::size_t i = 0; i < nodes; ++i) {
      while (next < large_events.size() && large_events[next].time <= grid[i] + 1e-12) {
        for (int c = 0; c < d; ++c) acc[c] += large_events[next].delta[c];
        ++next;
      }
      for (std::size_t c = 0; c < dim; ++c) large_vals[i * dim + c] = acc[c];
    }
  }

  std::vector<double> total_vals(nodes * dim);
  for (std::size_t i = 0; i < nodes * dim; ++i) {
    total_vals[i] = small_vals[i] + gauss_vals[i] + large_vals[i];
  }

  auto to_jumps = [](const std::vector<JumpEvent>& evs) {
    std::vector<PathJump> out;
    out.reserve(evs.size());
    for (const auto& ev : evs) out.push_back({ev.time, ev.delta});
    return out;
  };
  std::vector<PathJump> small_jumps = to_jumps(small_events);
  std::vector<PathJump> large_jumps = to_jumps(large_events);
  std::vector<PathJump> all_jumps = small_jumps;
  all_jumps.insert(all_jumps.end(), large_jumps.begin(), large_jumps.end());

  SampledLevyPath out;
  out.total = CadlagPath(d, grid, std::move(total_vals), std::move(all_jumps));
  out.small = CadlagPath(d, grid, std::move(small_vals), std::move(small_jumps));
  out.gauss = CadlagPath(d, grid, std::move(gauss_vals), {});
  out.large = CadlagPath(d, grid, std::move(large_vals), std::move(large_jumps));
  out.horizon = horizon;
  out.seed = seed;
  return out;
}

namespace {

CadlagPath shift_component(const CadlagPath& p, std::size_t i0) {
  const int d = p.dim();
  const std::size_t nodes = p.nodes();
  double s = p.time(i0);
  std::vector<double> times, values;
  times.reserve(nodes - i0);
  values.reserve((nodes - i0) * d);
  std::span<const double> base = p.value(i0);
  for (std::size_t i = i0; i < nodes; ++i) {
    times.push_back(p.time(i) - s);
    std::span<const double> v = p.value(i);
    for (int c = 0; c < d; ++c) values.push_back(v[c] - base[c]);
  }
  std::vector<PathJump> jumps;
  for (const PathJump& j : p.jumps()) {
    if (j.time > s + 1e-12) jumps.push_back({j.time - s, j.delta});
  }
  return CadlagPath(d, std::move(times), std::move(values), std::move(jumps));
}

}  // namespace

SampledLevyPath shift_driver(const SampledLevyPath& path, double s) {
  std::size_t i0 = path.total.index_of(s);
  SampledLevyPath out;
  out.total = shift_component(path.total, i0);
  out.small = shift_component(path.small, i0);
  out.gauss = shift_component(path.gauss, i0);
  out.large = shift_component(path.large, i0);
  out.horizon = path.horizon - s;
  out.seed = path.seed;
  return out;
}

}  // namespace levylab
