#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

#include "isaacs/problem.hpp"

namespace isaacs {

/// s = t_0 < t_1 < ... < t_n = T.
class Partition {
 public:
  explicit Partition(Eigen::VectorXd times);

  const Eigen::VectorXd& times() const { return times_; }
  std::size_t intervals() const { return static_cast<std::size_t>(times_.size() - 1); }
  double start() const { return times_(0); }
  double end() const { return times_(times_.size() - 1); }
  double mesh() const { return mesh_; }
  // Length of interval k in 1..n.
  double step(std::size_t k) const { return times_(k) - times_(k - 1); }

 private:
  Eigen::VectorXd times_;
  double mesh_;
};

/// xi_1..xi_n in {0, 1}; xi_k = 1 means v sees u on (t_{k-1}, t_k].
struct MarkSequence {
  std::vector<int> marks;
};

/// Indices 0 = l(0) < l(1) < ... < l(I) = n into a partition.
class SubGrid {
 public:
  explicit SubGrid(std::vector<std::size_t> indices);
  // Every interval its own block.
  static SubGrid trivial(std::size_t n);
  // Consecutive blocks of `block` intervals; the last may be shorter.
  static SubGrid uniform_blocks(std::size_t n, std::size_t block);
  // ceil(n / block) blocks of at most `block` intervals whose lengths differ
  // by at most one, longer blocks first.
  static SubGrid balanced_blocks(std::size_t n, std::size_t block);

  const std::vector<std::size_t>& indices() const { return indices_; }
  std::size_t blocks() const { return indices_.size() - 1; }
  std::size_t block_start(std::size_t i) const { return indices_[i]; }
  std::size_t block_end(std::size_t i) const { return indices_[i + 1]; }
  // Block containing interval k (1-based).
  std::size_t block_of(std::size_t k) const { return block_of_[k - 1]; }

 private:
  std::vector<std::size_t> indices_;
  std::vector<std::size_t> block_of_;
};

struct DensityReport {
  double max_block_length = 0.0;
  double max_deviation = 0.0;
  std::vector<double> deviations;
  double epsilon = 0.0;
  bool pass = false;
};

Partition make_uniform_partition(double s, double T, std::size_t n);

struct ScheduledMarks {
  MarkSequence marks;
  SubGrid subgrid;
};

/// Error-diffusion (Bresenham) marks, filled backward from T: interval k is
/// marked iff that keeps the marked time on [t_{k-1}, T] nearer to the
/// midpoint-rule integral of p there. Blocks are balanced_blocks(n, block).
/// Requires a time-only priority.
ScheduledMarks make_marks(const Partition& partition, const PrioritySpec& prio, std::size_t block);

DensityReport check_density(const Partition& partition, const MarkSequence& marks,
                            const SubGrid& subgrid, const PrioritySpec& prio, double epsilon);

// Smallest epsilon that make_marks output is guaranteed to pass with: max
// over blocks of max(len, mesh / len + max_k |p(mid_k) - p(r_{i-1})|).
double forced_epsilon(const Partition& partition, const SubGrid& subgrid,
                      const PrioritySpec& prio);

}  // namespace isaacs
