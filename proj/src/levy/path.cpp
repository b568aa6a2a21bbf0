#include "levylab/levy/path.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace levylab {

CadlagPath::CadlagPath(int dim, std::vector<double> times, std::vector<double> values,
                       std::vector<PathJump> jumps)
    : dim_(dim), times_(std::move(times)), values_(std::move(values)), jumps_(std::move(jumps)) {
  if (dim_ <= 0) throw std::invalid_argument("CadlagPath: dim must be positive");
  if (values_.size() != times_.size() * static_cast<std::size_t>(dim_)) {
    throw std::invalid_argument("CadlagPath: values/times size mismatch");
  }
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) {
      throw std::invalid_argument("CadlagPath: times must be strictly increasing");
    }
  }
  std::sort(jumps_.begin(), jumps_.end(),
            [](const PathJump& a, const PathJump& b) { return a.time < b.time; });
}

std::vector<double> CadlagPath::left_limit(std::size_t i) const {
  std::vector<double> out(value(i).begin(), value(i).end());
  if (const PathJump* j = jump_at_node(i)) {
    for (int c = 0; c < dim_; ++c) out[c] -= j->delta[c];
  }
  return out;
}

const PathJump* CadlagPath::jump_at_node(std::size_t i) const {
  double t = times_[i];
  auto it = std::lower_bound(jumps_.begin(), jumps_.end(), t,
                             [](const PathJump& j, double v) { return j.time < v; });
  if (it != jumps_.end() && it->time == t) return &*it;
  return nullptr;
}

std::size_t CadlagPath::index_of(double t, double tol) const {
  auto it = std::lower_bound(times_.begin(), times_.end(), t - tol);
  if (it == times_.end() || std::fabs(*it - t) > tol) {
    throw std::invalid_argument("CadlagPath: time " + std::to_string(t) + " is not a grid node");
  }
  return static_cast<std::size_t>(it - times_.begin());
}

std::size_t CadlagPath::floor_index(double t) const {
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) throw std::invalid_argument("CadlagPath: time before grid start");
  return static_cast<std::size_t>(it - times_.begin()) - 1;
}

void CadlagPath::validate() const {
  for (const PathJump& j : jumps_) {
    if (j.delta.size() != static_cast<std::size_t>(dim_)) {
      throw std::invalid_argument("CadlagPath: jump dimension mismatch");
    }
    std::size_t i = index_of(j.time);  // throws if a jump is off-grid
    if (i == 0) throw std::invalid_argument("CadlagPath: jump at t=0 not allowed");
  }
}

std::vector<double> merge_times(const std::vector<double>& a, const std::vector<double>& b,
                                double tol) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end(),
                        [tol](double x, double y) { return std::fabs(x - y) <= tol; }),
            out.end());
  return out;
}

}  // namespace levylab
