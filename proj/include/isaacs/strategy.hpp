#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "isaacs/pde.hpp"
#include "isaacs/schedule.hpp"

namespace isaacs {

enum class Side { kU, kV };

/// A player's rule for interval k (1-based). `history` holds the state at
/// the grid times t_0..t_{k-1}. `plain` is used when the opponent sees this
/// player's action first; `counter` answers an observed opponent action.
class Strategy {
 public:
  virtual ~Strategy() = default;
  virtual std::size_t plain(std::size_t k, std::span<const double> history) const = 0;
  virtual std::size_t counter(std::size_t k, std::span<const double> history,
                              std::size_t opponent) const = 0;
};

/// Markov strategy on lattice nodes: at each sub-grid time r_{i-1} the player
/// commits to a plain action and a counter-map chosen from the state there,
/// and holds both until r_i. Off-lattice states use the nearest node of the
/// clamped state.
struct MarkovStrategy final : Strategy {
  MarkovStrategy(Side side, SubGrid subgrid, SpatialGrid grid, std::size_t own_actions,
                 std::size_t opponent_actions);

  Side side;
  SubGrid subgrid;
  SpatialGrid grid;
  std::size_t own_actions;
  Eigen::MatrixXi plain_table;                 // blocks x nodes
  std::vector<Eigen::MatrixXi> counter_table;  // per opponent action: blocks x nodes

  std::size_t plain(std::size_t k, std::span<const double> history) const override;
  std::size_t counter(std::size_t k, std::span<const double> history,
                      std::size_t opponent) const override;

  // Commitment id at (block, node): plain + n * sum_j counter_j n^j.
  std::uint64_t commitment(std::size_t block, std::size_t node) const;
  std::size_t node_at_block_start(std::size_t k, std::span<const double> history) const;
};

// Commitment ids for a player with n own actions facing m opponent actions.
std::uint64_t commitment_count(std::size_t own, std::size_t opponent);
void decode_commitment(std::uint64_t id, std::size_t own, std::size_t opponent,
                       std::size_t& plain, std::vector<std::size_t>& counter);

/// Uniformly random Markov tables drawn from `seed`.
MarkovStrategy random_markov_strategy(Side side, const SubGrid& subgrid, const SpatialGrid& grid,
                                      std::size_t own_actions, std::size_t opponent_actions,
                                      std::uint64_t seed);

/// Feedback strategy that hashes the discretized last two grid-time states
/// (and the observed opponent action) into an action.
class RandomFeedbackStrategy final : public Strategy {
 public:
  RandomFeedbackStrategy(SpatialGrid grid, std::size_t own_actions, std::uint64_t seed);
  std::size_t plain(std::size_t k, std::span<const double> history) const override;
  std::size_t counter(std::size_t k, std::span<const double> history,
                      std::size_t opponent) const override;

 private:
  std::uint64_t key(std::size_t k, std::span<const double> history) const;
  SpatialGrid grid_;
  std::size_t own_;
  std::uint64_t seed_;
};

/// Wraps a strategy and replaces its choice by a hashed random action with
/// probability `rate` per (interval, node, opponent action).
class PerturbedStrategy final : public Strategy {
 public:
  PerturbedStrategy(std::shared_ptr<const Strategy> base, SpatialGrid grid,
                    std::size_t own_actions, double rate, std::uint64_t seed);
  std::size_t plain(std::size_t k, std::span<const double> history) const override;
  std::size_t counter(std::size_t k, std::span<const double> history,
                      std::size_t opponent) const override;

 private:
  std::size_t maybe_flip(std::size_t base, std::size_t k, std::span<const double> history,
                         std::uint64_t salt) const;
  std::shared_ptr<const Strategy> base_;
  SpatialGrid grid_;
  std::size_t own_;
  double rate_;
  std::uint64_t seed_;
};

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);
// Uniform [0,1) from 53 random bits.
inline double unit_interval(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace isaacs
