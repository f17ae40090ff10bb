#include "isaacs/schedule.hpp"

#include "isaacs/errors.hpp"

#include <algorithm>
#include <cmath>

namespace isaacs {

Partition::Partition(Eigen::VectorXd times) : times_(std::move(times)), mesh_(0.0) {
  if (times_.size() < 2) throw InvalidArgument("partition needs at least one interval");
  if (!times_.allFinite()) throw InvalidArgument("partition times must be finite");
  for (Eigen::Index k = 1; k < times_.size(); ++k) {
    const double h = times_(k) - times_(k - 1);
    if (!(h > 0.0)) throw InvalidArgument("partition times must be strictly increasing");
    mesh_ = std::max(mesh_, h);
  }
}

SubGrid::SubGrid(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
  if (indices_.size() < 2 || indices_.front() != 0) {
    throw InvalidArgument("sub-grid must start at 0 and contain a block");
  }
  for (std::size_t i = 1; i < indices_.size(); ++i) {
    if (indices_[i] <= indices_[i - 1]) throw InvalidArgument("sub-grid must be strictly increasing");
  }
  block_of_.resize(indices_.back());
  for (std::size_t i = 0; i + 1 < indices_.size(); ++i) {
    for (std::size_t k = indices_[i]; k < indices_[i + 1]; ++k) block_of_[k] = i;
  }
}

SubGrid SubGrid::trivial(std::size_t n) { return uniform_blocks(n, 1); }

SubGrid SubGrid::uniform_blocks(std::size_t n, std::size_t block) {
  if (n == 0 || block == 0) throw InvalidArgument("sub-grid needs n >= 1 and block >= 1");
  std::vector<std::size_t> idx;
  for (std::size_t l = 0; l < n; l += block) idx.push_back(l);
  idx.push_back(n);
  return SubGrid(std::move(idx));
}

SubGrid SubGrid::balanced_blocks(std::size_t n, std::size_t block) {
  if (n == 0 || block == 0) throw InvalidArgument("sub-grid needs n >= 1 and block >= 1");
  const std::size_t count = (n + block - 1) / block;
  const std::size_t base = n / count;
  const std::size_t longer = n % count;
  std::vector<std::size_t> idx{0};
  for (std::size_t i = 0; i < count; ++i) idx.push_back(idx.back() + base + (i < longer ? 1 : 0));
  return SubGrid(std::move(idx));
}

Partition make_uniform_partition(double s, double T, std::size_t n) {
  if (n == 0) throw InvalidArgument("partition needs n >= 1");
  if (!(s < T)) throw InvalidArgument("partition needs s < T");
  Eigen::VectorXd t(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    t(k) = s + static_cast<double>(k) * (T - s) / static_cast<double>(n);
  }
  t(n) = T;
  return Partition(std::move(t));
}

namespace {

void require_time_only(const PrioritySpec& prio) {
  if (!prio.time_only()) {
    throw InvalidArgument("deterministic marks require a state-independent priority");
  }
}

}  // namespace

ScheduledMarks make_marks(const Partition& partition, const PrioritySpec& prio,
                          std::size_t block) {
  require_time_only(prio);
  const std::size_t n = partition.intervals();
  SubGrid sub = SubGrid::balanced_blocks(n, block);
  const auto& t = partition.times();

  MarkSequence ms;
  ms.marks.assign(n, 0);
  // Filled backward from T: a value at t_k only sees the marks after it, so
  // the marked time on [t_k, T] is kept within half a step of the integral
  // of p there (midpoint rule per interval).
  double target = 0.0;
  double marked = 0.0;
  for (std::size_t k = n; k >= 1; --k) {
    const double h = partition.step(k);
    target += prio(0.5 * (t(k - 1) + t(k)), 0.0) * h;
    // Near-ties resolve to "unmarked" so rounding in the partition times does
    // not change exact-fraction patterns.
    if (marked + 0.5 * h < target - 1e-9 * h) {
      ms.marks[k - 1] = 1;
      marked += h;
    }
  }
  return {std::move(ms), std::move(sub)};
}

DensityReport check_density(const Partition& partition, const MarkSequence& marks,
                            const SubGrid& subgrid, const PrioritySpec& prio, double epsilon) {
  require_time_only(prio);
  const std::size_t n = partition.intervals();
  if (marks.marks.size() != n || subgrid.indices().back() != n) {
    throw InvalidArgument("marks, sub-grid and partition are misaligned");
  }
  const auto& t = partition.times();
  DensityReport r;
  r.epsilon = epsilon;
  for (std::size_t i = 0; i < subgrid.blocks(); ++i) {
    const std::size_t l0 = subgrid.block_start(i);
    const std::size_t l1 = subgrid.block_end(i);
    const double len = t(l1) - t(l0);
    double marked = 0.0;
    for (std::size_t k = l0 + 1; k <= l1; ++k) {
      if (marks.marks[k - 1] != 0) marked += partition.step(k);
    }
    const double dev = std::abs(marked / len - prio(t(l0), 0.0));
    r.deviations.push_back(dev);
    r.max_deviation = std::max(r.max_deviation, dev);
    r.max_block_length = std::max(r.max_block_length, len);
  }
  r.pass = r.max_block_length <= epsilon && r.max_deviation <= epsilon;
  return r;
}

double forced_epsilon(const Partition& partition, const SubGrid& subgrid,
                      const PrioritySpec& prio) {
  require_time_only(prio);
  const auto& t = partition.times();
  // Marked time on [t_k, T] stays within mesh / 2 of the midpoint integral
  // of p, so a block is off by at most mesh / len plus the drift of p away
  // from its value at the block start.
  const double hmax = partition.mesh();
  double eps = 0.0;
  for (std::size_t i = 0; i < subgrid.blocks(); ++i) {
    const std::size_t l0 = subgrid.block_start(i);
    const std::size_t l1 = subgrid.block_end(i);
    const double len = t(l1) - t(l0);
    const double p0 = prio(t(l0), 0.0);
    double drift = 0.0;
    for (std::size_t k = l0 + 1; k <= l1; ++k) {
      drift = std::max(drift, std::abs(prio(0.5 * (t(k - 1) + t(k)), 0.0) - p0));
    }
    // 1e-9 slack covers the tie tolerance used by make_marks.
    eps = std::max({eps, len, hmax / len + drift + 1e-9});
  }
  return eps;
}

}  // namespace isaacs
