#pragma once
// Discretized cadlag path: values are right limits on a strictly increasing
// grid, jumps are recorded explicitly and always sit on grid nodes.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace levylab {

struct PathJump {
  double time;
  std::vector<double> delta;
};

class CadlagPath {
 public:
  CadlagPath() = default;
  CadlagPath(int dim, std::vector<double> times, std::vector<double> values,
             std::vector<PathJump> jumps);

  int dim() const { return dim_; }
  std::size_t nodes() const { return times_.size(); }
  double time(std::size_t i) const { return times_[i]; }
  double horizon() const { return times_.empty() ? 0.0 : times_.back(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<PathJump>& jumps() const { return jumps_; }

  std::span<const double> value(std::size_t i) const {
    return {values_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }
  std::span<double> value_mut(std::size_t i) {
    return {values_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }
  const std::vector<double>& values_flat() const { return values_; }

  // value(i) minus the jump at node i (if any): the left limit
  std::vector<double> left_limit(std::size_t i) const;
  // jump delta at node i, or nullptr
  const PathJump* jump_at_node(std::size_t i) const;

  // Index of the grid node at time t (within tol); throws if t is off-grid.
  std::size_t index_of(double t, double tol = 1e-9) const;
  // Largest node index with time <= t.
  std::size_t floor_index(double t) const;

  // Checks the representation invariants; throws std::invalid_argument.
  void validate() const;

 private:
  int dim_ = 0;
  std::vector<double> times_;
  std::vector<double> values_;  // row-major (node, component)
  std::vector<PathJump> jumps_;
};

// Merge sorted time sets, dropping duplicates within tol.
std::vector<double> merge_times(const std::vector<double>& a, const std::vector<double>& b,
                                double tol = 1e-12);

}  // namespace levylab
